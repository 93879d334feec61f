from __future__ import annotations

import os

from hypothesis import settings

# Reproducible property tests by default; HYPOTHESIS_PROFILE=explore draws fresh examples.
settings.register_profile("default", derandomize=True, print_blob=True)
settings.register_profile("explore", derandomize=False, max_examples=500)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))
