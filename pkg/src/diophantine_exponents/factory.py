"""
Manifold-family factory.

This module provides the `create_manifold` function, the main entry point
for instantiating the built-in manifold families.

Example:
    ```python
    from diophantine_exponents import create_manifold

    family = create_manifold("heisenberg", {"k": 3})
    result = family.tau(RationalSampler(seed=1))
    result.value   # Fraction(4, 1)
    ```
"""

from typing import Any

from diophantine_exponents.base.family import ManifoldFamily
from diophantine_exponents.common.exceptions import UnsupportedError

# Registry of manifold families
# Maps family ID to family class
_FAMILIES: dict[str, type[ManifoldFamily]] = {}


def register_family(family_id: str, family_class: type[ManifoldFamily]) -> None:
    """
    Register a manifold family class.

    Args:
        family_id: Unique family identifier
        family_class: ManifoldFamily subclass to register
    """
    _FAMILIES[family_id.lower()] = family_class


def get_supported_families() -> list[str]:
    """
    Get list of registered family IDs.

    Returns:
        List of family ID strings
    """
    return list(_FAMILIES.keys())


def get_family_class(family_id: str) -> type[ManifoldFamily]:
    family_id_lower = family_id.lower()
    if family_id_lower not in _FAMILIES:
        supported = ", ".join(get_supported_families()) or "none"
        raise UnsupportedError(f"Family '{family_id}' is not supported. Supported: {supported}", "factory")
    return _FAMILIES[family_id_lower]


def create_manifold(family_id: str, config: dict[str, Any] | None = None) -> ManifoldFamily:
    """
    Create a manifold family instance.

    Args:
        family_id: Family identifier (e.g., "heisenberg", "veronese")
        config: Family parameters, for instance:
            - heisenberg: k, n
            - us: s, k
            - free: d, s, k
            - lie: algebra, k, riemannian
            - veronese: p, s
            - wedge: k
            - explicit: manifold
            plus initial_samples and stabilize_rounds

    Returns:
        ManifoldFamily instance (the map is built lazily)

    Raises:
        UnsupportedError: If family_id is not registered

    Example:
        ```python
        family = create_manifold("veronese", {"p": 3, "s": 2})
        print(get_supported_families())  # ["heisenberg", "us", "free", ...]
        ```
    """
    return get_family_class(family_id)(config or {})


# Auto-register families on import
def _auto_register_families() -> None:
    """Auto-register all built-in family implementations."""
    from diophantine_exponents.families.explicit import ExplicitFamily
    from diophantine_exponents.families.lie import FreeNilpotentFamily, HeisenbergFamily, LieFamily, UsFamily
    from diophantine_exponents.families.veronese import VeroneseFamily
    from diophantine_exponents.families.wedge import WedgeFamily

    for family_class in (
        HeisenbergFamily,
        UsFamily,
        FreeNilpotentFamily,
        LieFamily,
        VeroneseFamily,
        WedgeFamily,
        ExplicitFamily,
    ):
        register_family(family_class.id, family_class)


_auto_register_families()
