"""Drive the ADC model by hand, then show how oversampling tames noise.

    python3 demos/adc_oversampling.py
"""

import statistics

from verikit.crv import Rng
from verikit.duts import AdcDut
from verikit.sim import FallingEdge, RisingEdge, Simulator


def trace_one_conversion():
    sim = Simulator()
    dut = AdcDut(sim)
    rows = []

    async def stimulus():
        ops = [(1, 1, 1, 2.5),   # Config = 1 -> factor 2
               (1, 1, 2, 2.5)]   # Trigger
        for en, rw, addr, volts in ops:
            await RisingEdge(dut.clk)
            dut.en_in.value, dut.rw_in.value, dut.addr_in.value = en, rw, addr
            dut.data_in.value = 1
            dut.analog_in.value = volts
        await RisingEdge(dut.clk)
        dut.en_in.value = 0

    async def watch():
        while True:
            await FallingEdge(dut.clk)
            rows.append((sim.now, dut.start_out.get_int(), dut.busy_out.get_int(),
                         dut.eoc_out.get_int(), dut.digital_out.get_int()))

    sim.spawn(stimulus())
    sim.spawn(watch())
    sim.run(until=130)
    print("  t  start busy eoc digital_out")
    for t, start, busy, eoc, dig in rows:
        print(f"{t:>3}  {start:>5} {busy:>4} {eoc:>3} {dig:>11}")


def noise_study(sigma=0.05, conversions=400):
    print(f"\nGaussian noise sigma={sigma} V on every sample, {conversions} conversions at 0 V")
    for code, factor in enumerate((1, 2, 4, 8)):
        sim = Simulator()
        dut = AdcDut(sim, noise_sigma=sigma, noise_rng=Rng(11))
        results = []

        async def stimulus():
            await RisingEdge(dut.clk)
            dut.en_in.value, dut.rw_in.value, dut.addr_in.value, dut.data_in.value = 1, 1, 1, code
            dut.analog_in.value = 0.0
            for _ in range(conversions):
                await RisingEdge(dut.clk)
                dut.en_in.value, dut.addr_in.value, dut.data_in.value = 1, 2, 1
                await RisingEdge(dut.clk)
                dut.en_in.value = 0
                for _ in range(4 * factor):
                    await RisingEdge(dut.clk)

        async def collect():
            while True:
                await FallingEdge(dut.clk)
                if dut.eoc_out.get_int():
                    results.append(dut.digital_out.get_int())

        sim.spawn(stimulus())
        sim.spawn(collect())
        sim.run(until=10 * conversions * (4 * factor + 3))
        print(f"  factor {factor}: {len(results)} results, variance {statistics.variance(results):8.1f} codes^2")


if __name__ == "__main__":
    trace_one_conversion()
    noise_study()
