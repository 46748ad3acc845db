import hypothesis

# numba compiles on first kernel call; never let that count against a deadline
hypothesis.settings.register_profile(
    "default", deadline=None, max_examples=60, derandomize=True)
hypothesis.settings.load_profile("default")
