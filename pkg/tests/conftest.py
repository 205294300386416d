import pytest


class FixedRng:
    """Stand-in stream returning preset uniforms in order (last one repeats)."""

    def __init__(self, *values):
        self.values = list(values)

    def _next(self):
        return self.values.pop(0) if len(self.values) > 1 else self.values[0]

    def uniform(self):
        return self._next()

    uniform_open = uniform


@pytest.fixture
def fixed_rng():
    return FixedRng
