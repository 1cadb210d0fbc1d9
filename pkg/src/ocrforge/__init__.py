"""ocrforge: synthetic Arabic-script OCR data generation, CER/WER scoring,
and benchmark tooling."""

__version__ = "0.1.0"
