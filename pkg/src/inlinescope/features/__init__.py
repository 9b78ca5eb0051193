"""Static feature extraction from disassembly listings."""

from .cfg import CFG, BasicBlock, Loop, build_cfg, detect_loops
from .extract import FeatureVector, extract_features, features_to_csv
from .listing import Function, Instruction, Listing, parse_listing
from .registry import REGISTRY_VERSION, FeatureRegistry, categorize_instruction, get_registry

__all__ = [
    "CFG",
    "BasicBlock",
    "Loop",
    "build_cfg",
    "detect_loops",
    "FeatureVector",
    "extract_features",
    "features_to_csv",
    "Function",
    "Instruction",
    "Listing",
    "parse_listing",
    "REGISTRY_VERSION",
    "FeatureRegistry",
    "categorize_instruction",
    "get_registry",
]
