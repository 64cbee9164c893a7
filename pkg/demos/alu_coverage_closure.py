"""How fast does the ALU testbench close coverage as the transaction count grows?

    python3 demos/alu_coverage_closure.py
"""

import verikit.tb  # noqa: F401  (registers the bundled tests)
from verikit.crv import derive_seed
from verikit.fcov import percent
from verikit.tb.alu import BaseTestAlu
from verikit.uvm import run_test


def main():
    seed = derive_seed(1, "alu.base")
    print("transactions  coverage  aXbXop bins hit")
    for n in (10, 100, 1000, 5000, 30000):
        res = run_test("alu.base", seed, transactions=n, log_level="WARNING")
        cross = res.coverage.groups["alu.cg_1"].crosses["aXbXop"]
        hit = len(cross.hits) - len(cross.uncovered())
        flag = "" if res.passed else "  (scoreboard FAILED)"
        print(f"{n:>12}  {percent(res.coverage.coverage):>7}%  {hit:>3}/{len(cross.hits)}{flag}")

    # a constrained run that never issues SUB
    class NoSubtract(BaseTestAlu):
        constraints = {"op": [(0, 0), (2, 7)]}

    res = run_test(NoSubtract, seed, transactions=2000, log_level="WARNING")
    op_bins = res.coverage.groups["alu.cg_1"].coverpoints["op"].bins
    print("\nwith op constrained away from SUB:",
          ", ".join(f"{b.name}={b.hits}" for b in op_bins))


if __name__ == "__main__":
    main()
