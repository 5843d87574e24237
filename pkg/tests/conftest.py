import numpy as np
import pytest

from gridhealth import (
    Caps,
    DemandVolatility,
    FuelType,
    HealthModelParams,
    PlantSpec,
    Scenario,
    Subregion,
    TransportKernelParams,
    WeatherParams,
    figure1_scenario,
    two_region_testbed,
    validate_scenario,
)

DEFAULT_FUELS = (
    FuelType(0, "clean", 0.0, 0.0),
    FuelType(1, "hybrid", 0.5, 0.5),
    FuelType(2, "dirty", 1.0, 1.0),
)


def make_cell(cell_id, coords, population=0.0, slope=0.0, demand=0.0, plants=(),
              persistence=0.0, noise=0.0):
    return Subregion(
        id=cell_id, coords=coords, population=population, health_slope=slope,
        baseline_demand=demand,
        demand_volatility=DemandVolatility(persistence, noise),
        plants=tuple(plants),
    )


def single_cell_scenario(plants, population=1000.0, slope=0.001, demand=10.0,
                         caps=(100.0, 100.0), fuels=DEFAULT_FUELS, wind=("CALM",),
                         health_form="linear", baseline_rate=0.01, **kwargs):
    cell = make_cell(0, (0, 0), population=population, slope=slope, demand=demand,
                     plants=plants)
    return validate_scenario(Scenario(
        grid_dims=(1, 1),
        subregions=(cell,),
        fuels=fuels,
        caps=Caps(*caps),
        transport_params=TransportKernelParams(1.0, 0.0, 0.0),
        weather_params=WeatherParams(transition_stickiness=1.0, initial_field=wind),
        health_model=HealthModelParams(form=health_form, baseline_rate=baseline_rate),
        rng_seed=0,
        demand_routing="local",
        availability_noise=0.0,
        **kwargs,
    ))


@pytest.fixture(scope="session")
def figure1():
    return figure1_scenario()


@pytest.fixture(scope="session")
def two_region():
    return two_region_testbed()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
