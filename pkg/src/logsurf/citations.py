"""Fixed registry of citation tags attached to every verdict."""

REGISTRY = (
    "Thm-1.2",
    "Thm-2.1",
    "Cor-2.2",
    "Cor-2.3",
    "Prop-2.4",
    "Thm-3.1",
    "Thm-4.1",
    "Thm-5.1",
    "Def-5.2",
    "Prop-5.3",
    "Prop-6.3",
    "Thm-6.4",
)


def tag(name: str) -> str:
    if name not in REGISTRY:
        raise KeyError(f"unknown citation tag {name!r}")
    return name
