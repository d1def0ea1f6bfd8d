from hypothesis import HealthCheck, settings

# derandomized so every run draws the same examples
settings.register_profile(
    "ale",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("ale")
