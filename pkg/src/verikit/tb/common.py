"""Building blocks shared by the three testbenches."""

from ..sim import ClockCycles, FallingEdge, RisingEdge
from ..uvm import (
    ConfigDB,
    Queue,
    QueueEmpty,
    UVMError,
    current,
    top,
    uvm_analysis_port,
    uvm_component,
    uvm_driver,
    uvm_env,
    uvm_get_port,
    uvm_sequencer,
    uvm_test,
    uvm_tlm_analysis_fifo,
)


class BaseBfm:
    """Signal-level proxy: one driver coroutine and two monitor coroutines.

    Subclasses implement ``drive(item)``, ``idle()``, ``sample_inp()`` and
    ``sample_out()``.
    """

    def __init__(self, dut=None):
        self.dut = dut if dut is not None else top()
        self.sim = self.dut.sim
        self.rng = current().rng("uvm_test_top.bfm")
        self.driver_queue = Queue(maxsize=1)
        self.inp_mon_queue = Queue(maxsize=0)
        self.out_mon_queue = Queue(maxsize=0)
        self.falling_edges = 0

    def initialization(self):
        pass

    def idle(self):
        pass

    async def send_inp(self, item):
        await self.driver_queue.put(item)

    async def get_inp(self):
        return await self.inp_mon_queue.get()

    async def get_out(self):
        return await self.out_mon_queue.get()

    async def driver_bfm(self):
        rise = RisingEdge(self.dut.clk)
        while True:
            await rise
            try:
                item = self.driver_queue.get_nowait()
            except QueueEmpty:
                self.idle()
                continue
            self.drive(item)

    async def inp_mon_bfm(self):
        fall = FallingEdge(self.dut.clk)
        while True:
            await fall
            self.falling_edges += 1
            self.inp_mon_queue.put_nowait(self.sample_inp())

    async def out_mon_bfm(self):
        fall = FallingEdge(self.dut.clk)
        while True:
            await fall
            self.out_mon_queue.put_nowait(self.sample_out())

    def start_bfm(self):
        self.sim.start_soon(self.driver_bfm(), "driver_bfm")
        self.sim.start_soon(self.inp_mon_bfm(), "inp_mon_bfm")
        self.sim.start_soon(self.out_mon_bfm(), "out_mon_bfm")


class Monitor(uvm_component):
    """Pulls tuples from a BFM accessor chosen by name.

    ``covergroup`` is a zero-argument factory and ``to_sample`` maps a tuple to
    the covergroup's value dict; both are optional.
    """

    def __init__(self, name, parent, method_name, covergroup=None, to_sample=None):
        super().__init__(name, parent)
        self.method_name = method_name
        self.covergroup = covergroup
        self.to_sample = to_sample
        self.count = 0

    def build_phase(self):
        self.ap = uvm_analysis_port("ap", self)
        self.bfm = ConfigDB().get(self, "", "BFM")
        self.get_method = getattr(self.bfm, self.method_name, None)
        if not callable(self.get_method):
            raise UVMError(f"{self.get_full_name()}: BFM {type(self.bfm).__name__} "
                           f"has no accessor {self.method_name!r}")

    async def run_phase(self):
        cg = None
        if self.covergroup is not None:
            cg = self.covergroup()
            current().coverage.add_group(cg)
        get, write = self.get_method, self.ap.write
        sample = cg.sample if cg is not None else None
        to_sample = self.to_sample
        while True:
            datum = await get()
            self.count += 1
            if sample is not None:
                sample(to_sample(datum))
            write(datum)


class Driver(uvm_driver):
    def connect_phase(self):
        self.bfm = ConfigDB().get(self, "", "BFM")

    async def run_phase(self):
        self.bfm.initialization()
        port = self.seq_item_port
        while True:
            item = await port.get_next_item()
            await self.bfm.send_inp(item)
            port.item_done()


class Scoreboard(uvm_component):
    """Collects both monitor streams; subclasses check them in ``compare``."""

    max_error_logs = 10

    def build_phase(self):
        self.inp_fifo = uvm_tlm_analysis_fifo("inp_fifo", self)
        self.out_fifo = uvm_tlm_analysis_fifo("out_fifo", self)
        self.inp_get_port = uvm_get_port("inp_get_port", self)
        self.out_get_port = uvm_get_port("out_get_port", self)
        self.inp_export = self.inp_fifo.analysis_export
        self.out_export = self.out_fifo.analysis_export
        self.errors = 0
        self.checked = 0

    def connect_phase(self):
        self.inp_get_port.connect(self.inp_fifo.get_export)
        self.out_get_port.connect(self.out_fifo.get_export)

    def error(self, msg):
        self.errors += 1
        if self.errors <= self.max_error_logs:
            self.logger.error(msg)

    def check_phase(self):
        inps, outs = [], []
        while self.out_get_port.can_get():
            outs.append(self.out_get_port.try_get()[1])
        while self.inp_get_port.can_get():
            inps.append(self.inp_get_port.try_get()[1])
        if len(inps) != len(outs):
            self.error(f"monitor streams misaligned: {len(inps)} inputs vs {len(outs)} outputs")
        else:
            self.compare(inps, outs)
        if self.inp_get_port.can_get() or self.out_get_port.can_get():
            self.error("items left in scoreboard FIFOs after check")
        if self.errors:
            raise AssertionError(f"{self.errors} scoreboard mismatch(es)")
        self.logger.info("Test: Yay!!! Passed!")

    def compare(self, inps, outs):
        raise NotImplementedError


class BaseEnv(uvm_env):
    """Sequencer, driver, input/output monitors and a scoreboard."""

    scoreboard_cls = Scoreboard
    inp_covergroup = None
    out_covergroup = None

    @staticmethod
    def inp_to_sample(datum):
        return datum

    @staticmethod
    def out_to_sample(datum):
        return datum

    def build_phase(self):
        self.seqr = uvm_sequencer("seqr", self)
        ConfigDB().set(None, "*", "SEQR", self.seqr)
        self.driver = Driver.create("driver", self)
        self.inp_mon = Monitor("inp_mon", self, "get_inp", self.inp_covergroup, self.inp_to_sample)
        self.out_mon = Monitor("out_mon", self, "get_out", self.out_covergroup, self.out_to_sample)
        self.scoreboard = self.scoreboard_cls("scoreboard", self)

    def connect_phase(self):
        self.driver.seq_item_port.connect(self.seqr.seq_item_export)
        self.inp_mon.ap.connect(self.scoreboard.inp_export)
        self.out_mon.ap.connect(self.scoreboard.out_export)


class BaseTest(uvm_test):
    """Creates the BFM, publishes it, starts its coroutines and runs ``make_sequence``."""

    bfm_cls = BaseBfm
    env_cls = BaseEnv
    drain_cycles = 3

    def build_phase(self):
        self.bfm = self.bfm_cls()
        ConfigDB().set(None, "*", "BFM", self.bfm)
        self.bfm.start_bfm()
        self.env = self.env_cls.create("env", self)

    def make_sequence(self, transactions):
        raise NotImplementedError

    async def run_phase(self):
        self.raise_objection()
        seqr = ConfigDB().get(self, "", "SEQR")
        bfm = ConfigDB().get(self, "", "BFM")
        seq = self.make_sequence(ConfigDB().get(self, "", "TRANSACTIONS"))
        await seq.start(seqr)
        await ClockCycles(bfm.dut.clk, self.drain_cycles)
        self.drop_objection()
