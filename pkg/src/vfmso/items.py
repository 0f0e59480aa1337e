# vfmso/items.py

from pydantic import BaseModel, Field, model_validator

from vfmso.settings import INSTANCE_FORMAT_VERSION, WINDOW_SIGMAS


class WorkshopSpec(BaseModel):
    id: int
    teams: int = Field(ge=1)
    capable_kinds: list[str]


class ComponentSpec(BaseModel):
    car_id: int
    index: int
    kind: str
    rul_mean: float
    rul_std: float = Field(gt=0.0)
    previous_repair: float
    # keyed by workshop id; the keys are the capable workshops W_ij
    processing_time: dict[int, float]
    maintenance_cost: dict[int, float]

    @model_validator(mode="after")
    def _check_workshops(self):
        if not self.processing_time:
            raise ValueError(f"component {self.car_id}.{self.index} has no capable workshop")
        if set(self.processing_time) != set(self.maintenance_cost):
            raise ValueError(f"component {self.car_id}.{self.index}: time and cost workshops differ")
        if any(v <= 0 for v in self.processing_time.values()):
            raise ValueError(f"component {self.car_id}.{self.index}: processing times must be > 0")
        if any(v <= 0 for v in self.maintenance_cost.values()):
            raise ValueError(f"component {self.car_id}.{self.index}: maintenance costs must be > 0")
        if self.previous_repair > self.rul_mean - WINDOW_SIGMAS * self.rul_std:
            raise ValueError(
                f"component {self.car_id}.{self.index}: previous repair after the window start"
            )
        return self

    @property
    def capable_workshops(self) -> frozenset[int]:
        return frozenset(self.processing_time)


class CarSpec(BaseModel):
    id: int
    components: list[ComponentSpec] = Field(min_length=1)
    setup_time: dict[int, float]
    setup_cost: dict[int, float]


class VfmsoInstance(BaseModel):
    format_version: str = INSTANCE_FORMAT_VERSION
    name: str = "fleet"
    cars: list[CarSpec] = Field(min_length=1)
    workshops: list[WorkshopSpec] = Field(min_length=1)

    @model_validator(mode="after")
    def _check_references(self):
        if self.format_version != INSTANCE_FORMAT_VERSION:
            raise ValueError(
                f"unsupported instance format '{self.format_version}', "
                f"expected '{INSTANCE_FORMAT_VERSION}'"
            )
        known = {w.id for w in self.workshops}
        kinds = {w.id: set(w.capable_kinds) for w in self.workshops}
        for car in self.cars:
            for component in car.components:
                unknown = component.capable_workshops - known
                if unknown:
                    raise ValueError(
                        f"component {car.id}.{component.index} names unknown workshops {sorted(unknown)}"
                    )
                unable = sorted(k for k in component.capable_workshops if component.kind not in kinds[k])
                if unable:
                    raise ValueError(
                        f"component {car.id}.{component.index} ({component.kind}) lists workshops "
                        f"{unable} that cannot repair that kind"
                    )
                missing = component.capable_workshops - set(car.setup_time)
                missing |= component.capable_workshops - set(car.setup_cost)
                if missing:
                    raise ValueError(f"car {car.id} lacks set-up values for workshops {sorted(missing)}")
        return self

    @property
    def team_slots(self) -> list[tuple[int, int]]:
        """Every (workshop id, team index) pair; a gene of the workshop vector indexes this list."""
        return [(w.id, t) for w in self.workshops for t in range(w.teams)]

    @property
    def component_count(self) -> int:
        return sum(len(car.components) for car in self.cars)

    def component_offsets(self) -> list[int]:
        """Position of each car's first component in the flattened component order."""
        offsets, running = [], 0
        for car in self.cars:
            offsets.append(running)
            running += len(car.components)
        return offsets
