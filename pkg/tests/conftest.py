from hypothesis import HealthCheck, settings

settings.register_profile(
    "pfq",
    deadline=None,
    max_examples=60,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("pfq")
