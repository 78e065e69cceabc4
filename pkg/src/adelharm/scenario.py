"""Scenario files: JSON documents validated with pydantic."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

SUITES = ("level0", "category", "smooth", "poisson", "all")


class ScenarioError(ValueError):
    """Schema or syntax problem; ``problems`` lists every violation as (location, message)."""

    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = problems
        super().__init__("\n".join(f"{loc}: {msg}" for loc, msg in problems))


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


def _check_orders(v: list[int]) -> list[int]:
    for m in v:
        if m < 2:
            raise ValueError(f"trivial factor {m} in orders {v}; every cyclic order must be at least 2")
    return v


class ModelSpec(_Strict):
    level: int = Field(ge=1, le=4)
    components: dict[str, list[int]] = Field(default_factory=dict)
    cut: Optional[list[int]] = None

    @field_validator("components")
    @classmethod
    def _orders(cls, comps):
        for key, orders in comps.items():
            _check_orders(orders)
        return comps

    @model_validator(mode="after")
    def _shapes(self):
        for key in self.components:
            parts = [p for p in key.strip().strip("()[]").split(",") if p.strip()]
            try:
                [int(p) for p in parts]
            except ValueError:
                raise ValueError(f"component key {key!r} is not an integer tuple")
            if len(parts) != self.level:
                raise ValueError(f"component key {key!r} should have {self.level} coordinates")
        if self.cut is not None and len(self.cut) != self.level:
            raise ValueError(f"cut {self.cut} should have {self.level} coordinates")
        return self


class BoundsSpec(_Strict):
    lo: Optional[int] = None
    hi: Optional[int] = None
    discrete_below: Optional[int] = None
    cocompact_above: Optional[int] = None


class FunctionSpec(_Strict):
    group: list[int]
    values: list[tuple[list[int], str]] = Field(default_factory=list)

    @field_validator("group")
    @classmethod
    def _orders(cls, v):
        return _check_orders(v)


class GermSpec(_Strict):
    flavor: Literal["E", "E_tilde", "E_prime", "E_tilde_prime"]
    window: tuple[int, int]
    data: list[tuple[list[int], str]] = Field(default_factory=list)


class SchwartzSpec(_Strict):
    coeff: str = "1"
    a: list[int]
    z: list[int]


class SizesSpec(_Strict):
    """Case counts for the generated part of each suite."""

    level0_max_order: int = Field(12, ge=1)
    level0_random: int = Field(5, ge=0)
    homs: int = Field(20, ge=0)
    pairs: int = Field(20, ge=0)
    category_models: int = Field(6, ge=0)
    category_pairs: int = Field(10, ge=0)
    smooth_models: int = Field(4, ge=0)
    smooth_random: int = Field(5, ge=0)
    poisson_models: int = Field(3, ge=0)
    poisson_functions: int = Field(10, ge=0)
    max_cases: Optional[int] = Field(None, ge=0)


class Scenario(_Strict):
    name: str = "scenario"
    model: Optional[ModelSpec] = None
    bounds: Optional[BoundsSpec] = None
    seed: int = 0
    suite: Optional[str] = None
    functions: list[FunctionSpec] = Field(default_factory=list)
    germs: list[GermSpec] = Field(default_factory=list)
    schwartz: list[SchwartzSpec] = Field(default_factory=list)
    sizes: SizesSpec = Field(default_factory=SizesSpec)
    corrupt: bool = False
    only: Optional[list[str]] = None

    @field_validator("suite")
    @classmethod
    def _suite(cls, v):
        if v is not None and v not in SUITES:
            raise ValueError(f"unknown suite {v!r}; valid suites are {', '.join(SUITES)}")
        return v

    @model_validator(mode="after")
    def _needs_model(self):
        if (self.germs or self.schwartz) and self.model is None:
            raise ValueError("germ and Schwartz literals need a model")
        if self.schwartz and (self.model is None or self.model.cut is None):
            raise ValueError("Schwartz literals need a model with a cut")
        return self

    def to_json(self) -> dict:
        return self.model_dump(mode="json", exclude_defaults=True)


def check_suite(name: str) -> str:
    if name not in SUITES:
        raise ScenarioError([("suite", f"unknown suite {name!r}; valid suites are {', '.join(SUITES)}")])
    return name


def scenario_from_dict(obj: Any) -> Scenario:
    try:
        return Scenario.model_validate(obj)
    except ValidationError as exc:
        problems = []
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"]) or "<root>"
            msg = err["msg"]
            if msg.startswith("Value error, "):
                msg = msg[len("Value error, ") :]
            problems.append((loc, msg))
        raise ScenarioError(problems) from None


def parse_scenario_text(text: str) -> Scenario:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError([(f"line {exc.lineno} column {exc.colno}", f"malformed JSON: {exc.msg}")]) from None
    return scenario_from_dict(obj)


def parse_scenario(path) -> Scenario:
    p = Path(path)
    if not p.exists():
        raise ScenarioError([(str(p), "file does not exist")])
    return parse_scenario_text(p.read_text())
