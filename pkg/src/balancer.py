"""
Balancing rule for the recursive division.

Decides which parameter a separator step balances at a recursion node.
"""

from typing import AbstractSet, Dict, List, Optional, Tuple

from .models import BalanceParam

FALLBACK_ORDER = (BalanceParam.VERTICES, BalanceParam.BOUNDARY, BalanceParam.POINTS)


class BalanceRouter:
    """Routes a recursion node to the parameter its separator balances"""

    def __init__(self, refined: bool = True):
        """
        Initialize the router.

        Args:
            refined: cycle through vertices, boundary and points by depth mod 3;
                otherwise alternate vertices and boundary by depth mod 2
        """
        self.refined = refined
        if refined:
            self.schedule = (BalanceParam.VERTICES, BalanceParam.BOUNDARY, BalanceParam.POINTS)
        else:
            self.schedule = (BalanceParam.VERTICES, BalanceParam.BOUNDARY)

    def designated(self, depth: int) -> BalanceParam:
        return self.schedule[depth % len(self.schedule)]

    def candidates(self, depth: int, over: Dict[BalanceParam, bool]) -> List[BalanceParam]:
        """
        Over-threshold parameters in the order they should be tried.

        Args:
            depth: depth of the node in the recursion tree
            over: which parameters exceed their leaf threshold

        Returns:
            The designated parameter first when it is over threshold, then the
            remaining over-threshold parameters in fallback order
        """
        first = self.designated(depth)
        order = [first] + [p for p in FALLBACK_ORDER if p != first]
        return [p for p in order if p in self.schedule and over.get(p, False)]

    def route(
        self,
        depth: int,
        over: Dict[BalanceParam, bool],
        failed: AbstractSet[BalanceParam] = frozenset(),
    ) -> Optional[Tuple[BalanceParam, str]]:
        """
        Determine the parameter to balance.

        Routing priority:
        1. The parameter designated by depth (mod 3, or mod 2 for classic)
        2. Vertices, then boundary vertices, then P-points, among those over threshold

        Args:
            depth: depth of the node in the recursion tree
            over: which parameters exceed their leaf threshold
            failed: parameters already tried at this node without a usable separator

        Returns:
            Tuple of (parameter, reasoning), or None once every candidate has failed
        """
        choices = self.candidates(depth, over)
        if not choices:
            raise ValueError(f"node at depth {depth} exceeds no threshold and should be a leaf")
        remaining = [p for p in choices if p not in failed]
        if not remaining:
            return None
        first = self.designated(depth)
        chosen = remaining[0]
        if chosen == first:
            reasoning = f"depth {depth} designates {first.value}, which exceeds its threshold"
        elif first in failed:
            reasoning = f"depth {depth} designates {first.value}, which made no progress; falling back to {chosen.value}"
        else:
            reasoning = (
                f"depth {depth} designates {first.value}, which is within its threshold; "
                f"falling back to {chosen.value}"
            )
        if failed - {first}:
            reasoning += f" (also no progress: {', '.join(sorted(p.value for p in failed - {first}))})"
        return chosen, reasoning
