import pytest

from congrel.corpus import builtin, builtin_names

SMALL_NAMES = [n for n in builtin_names() if builtin(n).size <= 4]
TINY_NAMES = [n for n in builtin_names() if builtin(n).size <= 3]

# algebras where the 4-generated hypothesis holds; pure sets are the
# deliberate negative controls and are excluded
MODULAR_FAST = ["z2", "z4", "z2xz2", "bool2", "bool4"]
MODULAR_SLOW = ["n5", "m3"]


@pytest.fixture(params=SMALL_NAMES)
def small_algebra(request):
    return builtin(request.param)
