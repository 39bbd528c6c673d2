# hamlim/schemas/experiments.py
from datetime import datetime
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field


class ExperimentReport(BaseModel):
    """
    Outcome of one end-to-end run.

    Serialized with the key "pass" for `passed`. `generated_at` and
    `wall_time_seconds` are the only fields that change between identical
    runs.
    """

    model_config = ConfigDict(populate_by_name=True)

    name: str = Field(..., description="Experiment name.", examples=["parity"])
    seed: Optional[int] = Field(None, description="Master seed, when the run is seeded.")
    inputs: dict[str, Any] = Field(default_factory=dict)
    metrics: dict[str, Any] = Field(default_factory=dict)
    tolerances: dict[str, float] = Field(default_factory=dict)
    passed: bool = Field(..., alias="pass")
    generated_at: Optional[datetime] = Field(None, description="UTC time the report was built.")
    wall_time_seconds: Optional[float] = Field(None, ge=0)
