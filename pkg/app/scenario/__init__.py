from .loader import Scenario, load_scenario
from .models import ScenarioModel

__all__ = ["Scenario", "ScenarioModel", "load_scenario"]
