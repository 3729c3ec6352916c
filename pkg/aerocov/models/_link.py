from enum import Enum


class LinkClass(str, Enum):
    """Air-to-ground link class of a single user-UAV pair."""

    LOS = "los"
    NLOS = "nlos"

    def __str__(self) -> str:
        return self.value
