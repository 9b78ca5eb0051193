"""Pydantic request/response models for the service API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class VersionResponse(BaseModel):
    version: str
    registry_version: str


class GroundTruthRequest(BaseModel):
    binary_b64: str = Field(description="base64-encoded ELF image with DWARF")
    label: str = "<upload>"


class DeltaFlowRequest(BaseModel):
    baseline: dict = Field(description="InliningReport JSON of the baseline build")
    variant: dict = Field(description="InliningReport JSON of the variant build")


class RemarkParseRequest(BaseModel):
    text: str = Field(description="compiler stderr captured under -Rpass*=inline")


class ReconcileRequest(BaseModel):
    report: dict = Field(description="InliningReport JSON from the same build")
    remarks: list[dict] | None = None
    text: str | None = Field(default=None, description="raw stderr, parsed when remarks absent")


class SimulateRequest(BaseModel):
    site: dict = Field(description="CallSiteDescription JSON")
    params: dict | None = Field(default=None, description="InlineParams overrides")
    opt_level: str = "O2"


class FeatureExtractRequest(BaseModel):
    listing_text: str = Field(description="disassembly listing text")
    registry_version: str | None = None


class CdfRequest(BaseModel):
    ratios: list[float]
    svg: bool = False


class DriftRequest(BaseModel):
    table_a: dict[str, list[float]]
    table_b: dict[str, list[float]]
    k: int = 18
    registry_version: str | None = None


class SweepConfigRequest(BaseModel):
    config: dict = Field(description="sweep configuration (same schema as the YAML file)")


class SweepSearchRequest(BaseModel):
    config: dict
    budget: int


class ErrorBody(BaseModel):
    kind: str
    detail: str
