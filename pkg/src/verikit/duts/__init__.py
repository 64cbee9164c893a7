"""Cycle-level models of the ALU, ADC and SECDED ECC designs."""

from .adc import AdcDut, AdcRegisters, adc_convert, adc_quantize, oversample_mean
from .alu import AluDut, AluOp, alu_eval
from .ecc import DecodeResult, EccCodec, EccCore, EccDut, hamming_bits
