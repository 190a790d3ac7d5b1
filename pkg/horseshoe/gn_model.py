# horseshoe/gn_model.py
"""
horseshoe/gn_model.py
-------------------------------------------------
Analytic scar G_n of P_n: a central vertex q0 with horizontal edges
h_0 .. h_{n-1} (|h_j| = alpha*lambda^j) and vertical edges v_0 .. v_{n+1}
(|v_i| = beta*lambda^i).

    v_i, i < n   hangs at the far end of h_{n-1-i}
    v_n          leaves h_{n-1} at distance alpha/lambda from q0
    v_{n+1}      leaves h_{n-2} at distance alpha/lambda^2 from q0
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from core.errors import OutOfRange
from core.scar import ScarGraph, ScarPoint
from horseshoe.nbt import NBTParameters, nbt_parameters

CENTER = "q0"


@dataclass
class GnModel:
    """
    Attributes:
        params: the family parameters
        scar: the metric graph
        rays: for each horizontal edge j, the edge ids of the path q0 -> h_j -> v at its end
        branches: for i in (n, n+1), the edge ids of the path q0 -> split point -> v_i
    """

    params: NBTParameters
    scar: ScarGraph
    rays: Dict[int, List[int]]
    branches: Dict[int, List[int]] = field(default_factory=dict)

    @property
    def center(self) -> ScarPoint:
        return ScarPoint("vertex", vertex=CENTER)

    def ray_length(self, j: int) -> float:
        return sum(self.scar.edges[e].length for e in self.rays[j])

    def directions(self) -> List[Tuple[str, List[int]]]:
        """Every path leaving q0: the n rays, then the two side branches."""
        out = [(f"h{j}", self.rays[j]) for j in sorted(self.rays)]
        return out + [(f"v{i}", self.branches[i]) for i in sorted(self.branches)]

    def walk(self, path: List[int], distance: float) -> ScarPoint:
        """The point at `distance` from q0 along `path`, clamped at its tip."""
        if distance < 0:
            raise OutOfRange("negative distance", distance=distance)
        left = distance
        for eid in path:
            e = self.scar.edges[eid]
            if left < e.length:
                return self.scar.edge_point(eid, left)
            left -= e.length
        return ScarPoint("vertex", vertex=self.scar.edges[path[-1]].v)

    def point_along(self, j: int, distance: float) -> ScarPoint:
        return self.walk(self.rays[j], distance)


def build_gn_model(n: int) -> GnModel:
    params = nbt_parameters(n)
    lam, alpha, beta = params.lam, params.alpha, params.beta
    edges, rays, branches = [], {}, {}

    def add(u, v, length) -> int:
        edges.append((u, v, length))
        return len(edges) - 1

    splits = {n - 1: (alpha / lam, n), n - 2: (alpha / lam ** 2, n + 1)}
    for j in range(n):
        end = ("h", j)
        length = alpha * lam ** j
        if j in splits:
            at, vi = splits[j]
            mid = ("s", j)
            first = add(CENTER, mid, at)
            second = add(mid, end, length - at)
            branches[vi] = [first, add(mid, ("v", vi), beta * lam ** vi)]
            rays[j] = [first, second]
        else:
            rays[j] = [add(CENTER, end, length)]
    for i in range(n):
        rays[n - 1 - i].append(add(("h", n - 1 - i), ("v", i), beta * lam ** i))

    scar = ScarGraph.from_edges(edges, name=f"G{n}")
    return GnModel(params, scar, rays, branches)


def build_scar_Gn(n: int) -> ScarGraph:
    return build_gn_model(n).scar
