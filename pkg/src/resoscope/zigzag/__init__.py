from .barcode import BarcodeResult, OutputBar, compute_barcode
from .filtration import (
    AtomicEventStream,
    ZigzagFiltration,
    atomize,
    build_filtration,
    compute_colored_barcode,
)
from .forest import BarcodeForest, InternalError
from .oracle import ZigzagOracle, oracle_barcode

__all__ = [
    "AtomicEventStream",
    "BarcodeForest",
    "BarcodeResult",
    "InternalError",
    "OutputBar",
    "ZigzagFiltration",
    "ZigzagOracle",
    "atomize",
    "build_filtration",
    "compute_barcode",
    "compute_colored_barcode",
    "oracle_barcode",
]
