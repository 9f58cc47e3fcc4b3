import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

# make the sibling oracle helpers importable from any test module
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "ci",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ci")
