"""Support geometry: covers, rectification classes, and what gets rejected.

A spreading support S is identifiable by a period-L delta train when its
(LT, 1/T)-translates tile without overlap and cover no point of the base
rectangle more than L times.  rectify() partitions the base rectangle into
classes of subcells sharing a folded occupancy pattern; each class yields one
restricted linear system.
"""

from opsample import bandwidth, check_identifiable, periodization_count, presets, rectify
from opsample.errors import NotIdentifiable


def describe(name, S):
    print(f"--- {name} ---")
    print(f"  cells: {list(S.cells)}")
    print(f"  area {S.area:.4f}, max cover {int(periodization_count(S).max())} (L = {S.L})")
    if not check_identifiable(S):
        try:
            rectify(S)
        except NotIdentifiable as exc:
            print(f"  rejected: {exc}")
        return
    report = rectify(S)
    sizes = [len(cls.cells) for cls in report.classes]
    print(f"  identifiable; {len(report.classes)} classes of sizes {sizes}")
    print(f"  bandwidth B(S) = {bandwidth(S):.4f} = {bandwidth(S) / S.omega:.3f} * Omega")


def main():
    describe("staircase (three cells, one class)", presets.staircase_support())
    describe("seven-cell (area 1, exact 3-cover)", presets.seven_cell_support())
    describe("sheared band (wraps around the rectangle)",
             presets.sheared_parallelogram_support(shear=1))
    describe("stacked cover violation (count L+1)", presets.stacked_cover_violation())
    describe("translate collision (fold overlaps)", presets.translate_collision_support())


if __name__ == "__main__":
    main()
