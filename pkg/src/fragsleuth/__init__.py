"""fragsleuth: compression-tool fingerprinting for 4096-byte file fragments."""

__version__ = "0.1.0"

DEFAULT_SEED = "1.3035772690"
