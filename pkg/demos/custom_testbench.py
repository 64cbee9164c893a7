"""Build a small testbench from scratch around an 8-bit accumulator.

Shows the pieces a new environment needs: a DUT model on kernel signals,
a sequence item, a sequence, a driver, a monitor feeding a scoreboard
through an analysis FIFO, ConfigDB sharing and objections.

    python3 demos/custom_testbench.py
"""

from verikit.crv import rand_uint8_t
from verikit.sim import FallingEdge, RisingEdge
from verikit.uvm import (
    ConfigDB,
    run_test,
    top,
    uvm_analysis_port,
    uvm_component,
    uvm_driver,
    uvm_env,
    uvm_get_port,
    uvm_sequence,
    uvm_sequence_item,
    uvm_sequencer,
    uvm_test,
    uvm_tlm_analysis_fifo,
)


class Accumulator:
    """acc <= acc + din, modulo 256.  din is latched on the falling edge and
    added on the next rising edge, so drivers write on rising edges and
    monitors sample on falling edges without racing."""

    def __init__(self, sim, bug=False):
        self.sim = sim
        self.clk = sim.signal("clk", 1)
        self.din = sim.signal("din", 8, init=0)
        self.acc = sim.signal("acc", 8, init=0)
        self.bug = bug
        sim.start_clock(self.clk, 10)
        sim.spawn(self._proc(), "accumulator")

    async def _proc(self):
        while True:
            await FallingEdge(self.clk)
            step = self.din.get_int()
            if self.bug and step & 0x81 == 0x81:
                step ^= 0x80
            await RisingEdge(self.clk)
            self.acc.value = (self.acc.get_int() + step) & 0xFF


class AddItem(uvm_sequence_item):
    value = rand_uint8_t()


class AddSeq(uvm_sequence):
    async def body(self):
        for _ in range(ConfigDB().get(None, "", "TRANSACTIONS")):
            item = AddItem("add")
            await self.start_item(item)
            item.randomize()
            await self.finish_item(item)


class AddDriver(uvm_driver):
    async def run_phase(self):
        dut = top()
        while True:
            item = await self.seq_item_port.get_next_item()
            await RisingEdge(dut.clk)
            dut.din.value = item.value
            self.seq_item_port.item_done()


class AccMonitor(uvm_component):
    def build_phase(self):
        self.ap = uvm_analysis_port("ap", self)

    async def run_phase(self):
        dut = top()
        while True:
            await FallingEdge(dut.clk)
            self.ap.write((dut.din.get_int(), dut.acc.get_int()))


class AccScoreboard(uvm_component):
    def build_phase(self):
        self.fifo = uvm_tlm_analysis_fifo("fifo", self)
        self.port = uvm_get_port("port", self)

    def connect_phase(self):
        self.port.connect(self.fifo.get_export)

    def check_phase(self):
        samples = []
        while self.port.can_get():
            samples.append(self.port.try_get()[1])
        # din seen at falling edge k shows up in acc at falling edge k+1
        model = samples[0][1]
        for k in range(1, len(samples)):
            model = (model + samples[k - 1][0]) & 0xFF
            if samples[k][1] != model:
                self.logger.error(f"cycle {k}: acc={samples[k][1]} expected {model}")
                return
        self.logger.info(f"{len(samples)} cycles matched the reference model")


class AccEnv(uvm_env):
    def build_phase(self):
        self.seqr = uvm_sequencer("seqr", self)
        self.driver = AddDriver("driver", self)
        self.monitor = AccMonitor("monitor", self)
        self.scoreboard = AccScoreboard("scoreboard", self)

    def connect_phase(self):
        self.driver.seq_item_port.connect(self.seqr.seq_item_export)
        self.monitor.ap.connect(self.scoreboard.fifo.analysis_export)


class AccTest(uvm_test):
    dut_model = Accumulator
    default_transactions = 200

    def build_phase(self):
        self.env = AccEnv("env", self)

    async def run_phase(self):
        self.raise_objection()
        await AddSeq("seq").start(self.env.seqr)
        for _ in range(2):
            await FallingEdge(top().clk)
        self.drop_objection()


class BuggyAccTest(AccTest):
    @staticmethod
    def dut_model(sim):
        return Accumulator(sim, bug=True)


if __name__ == "__main__":
    for cls in (AccTest, BuggyAccTest):
        res = run_test(cls, seed=5)
        print(f"{cls.__name__}: {'PASS' if res.passed else 'FAIL'} at t={res.sim_time} ns")
        for line in res.log:
            print("   ", line)
