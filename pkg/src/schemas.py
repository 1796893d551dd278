"""Pydantic schemas for poset files, result files and generator specs."""

from fractions import Fraction
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

MAX_SEED = 2**64
# Integers beyond this are written as decimal strings
MAX_EXACT_INT = 2**53


def rational_to_json(value: Optional[Fraction]) -> Union[int, str, None]:
    """Integral values become ints (strings past 2^53), others "p/q"."""
    if value is None:
        return None
    value = Fraction(value)
    if value.denominator == 1:
        number = value.numerator
        return str(number) if abs(number) > MAX_EXACT_INT else number
    return f"{value.numerator}/{value.denominator}"


def rational_from_json(value: Union[int, str, None]) -> Optional[Fraction]:
    if value is None:
        return None
    return Fraction(value)


class PosetFile(BaseModel):
    """Structured poset file: element count and strict relations u < v."""

    n: int
    relations: list[tuple[int, int]] = Field(default_factory=list)

    @field_validator('n')
    @classmethod
    def n_not_negative(cls, v: int) -> int:
        """Validate that the element count is not negative."""
        if v < 0:
            raise ValueError('n cannot be negative')
        return v


class ResultParams(BaseModel):
    """Parameters recorded with a result; rationals are ints or "p/q" strings."""

    model_config = ConfigDict(populate_by_name=True)

    l: Optional[int] = None
    gamma: Optional[Union[int, str]] = None
    lambda_: Optional[Union[int, str]] = Field(default=None, alias='lambda')

    @field_validator('gamma', 'lambda_')
    @classmethod
    def rational_parses(cls, v: Union[int, str, None]) -> Union[int, str, None]:
        """Validate that rational fields parse as fractions."""
        if isinstance(v, str):
            try:
                Fraction(v)
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f'not a rational number: {v!r}') from exc
        return v


class OrderRelationEntry(BaseModel):
    """Relation a result satisfies in one order of a multi-order run."""

    index: int
    relation: Literal['ascending', 'descending', 'incomparable']


class ResultFile(BaseModel):
    """Extraction result as written by find and multi and read by verify."""

    kind: Literal['set_chain', 'incomparable']
    direction: Optional[Literal['ascending', 'descending']] = None
    sets: list[list[int]]
    params: ResultParams = Field(default_factory=ResultParams)
    guarantee: Optional[float] = None
    achieved: int
    orders: Optional[list[OrderRelationEntry]] = None

    @model_validator(mode='after')
    def direction_matches_kind(self) -> 'ResultFile':
        """Validate that chain results carry a direction and others do not."""
        if self.kind == 'set_chain' and self.direction is None:
            raise ValueError('set_chain results need a direction')
        if self.kind == 'incomparable' and self.direction is not None:
            raise ValueError('incomparable results have no direction')
        return self

    def to_json_dict(self) -> dict:
        """Plain dict in the on-disk layout: direction and orders only when set."""
        data = {'kind': self.kind}
        if self.direction is not None:
            data['direction'] = self.direction
        data['sets'] = [list(members) for members in self.sets]
        data['params'] = self.params.model_dump(by_alias=True, exclude_none=True)
        data['guarantee'] = self.guarantee
        data['achieved'] = self.achieved
        if self.orders is not None:
            data['orders'] = [entry.model_dump() for entry in self.orders]
        return data


GenModel = Literal['chain', 'antichain', 'random-dag', 'layered', 'grid', 'stacked']


class GenSpec(BaseModel):
    """Generator specification; stacked specs nest their base spec."""

    model: GenModel
    n: Optional[int] = None
    p: Optional[float] = None
    widths: Optional[list[int]] = None
    d1: Optional[int] = None
    d2: Optional[int] = None
    base: Optional['GenSpec'] = None
    copies: Optional[int] = None
    seed: int = 0

    @field_validator('seed')
    @classmethod
    def seed_in_range(cls, v: int) -> int:
        """Validate that the seed fits in 64 unsigned bits."""
        if not 0 <= v < MAX_SEED:
            raise ValueError('seed must be in [0, 2^64)')
        return v

    @field_validator('p')
    @classmethod
    def p_is_probability(cls, v: Optional[float]) -> Optional[float]:
        """Validate that p lies in [0, 1]."""
        if v is not None and not 0 <= v <= 1:
            raise ValueError('p must be in [0, 1]')
        return v

    @model_validator(mode='after')
    def fields_match_model(self) -> 'GenSpec':
        """Validate that the fields the model needs are present and sensible."""
        if self.model in ('chain', 'antichain', 'random-dag'):
            if self.n is None or self.n < 0:
                raise ValueError(f'{self.model} needs n ≥ 0')
        if self.model in ('random-dag', 'layered') and self.p is None:
            raise ValueError(f'{self.model} needs p')
        if self.model == 'layered':
            if not self.widths or any(w < 1 for w in self.widths):
                raise ValueError('layered needs positive widths')
        if self.model == 'grid':
            if self.d1 is None or self.d2 is None or self.d1 < 1 or self.d2 < 1:
                raise ValueError('grid needs d1 ≥ 1 and d2 ≥ 1')
        if self.model == 'stacked':
            if self.base is None:
                raise ValueError('stacked needs a base spec')
            if self.copies is None or self.copies < 1:
                raise ValueError('stacked needs copies ≥ 1')
        return self


GenSpec.model_rebuild()
