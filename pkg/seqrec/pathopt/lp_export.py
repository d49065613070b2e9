"""
Path ILP built with python-mip and written in the CPLEX LP dialect

Variables: u_j_k (transition j -> k, binary), z_j (terminal, binary),
v_j (visit order, integer). Ordering is row-major u, then z, then v.
"""

import os
import tempfile
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from loguru import logger
from mip import BINARY, CBC, INTEGER, MAXIMIZE, Model, xsum

from ..models.chain import ChainScores
from .held_karp import PathCut


def _tied_unary(scores: ChainScores) -> np.ndarray:
    if scores.length < 2:
        return np.zeros(scores.m)
    row = scores.unary[1]
    for t in range(2, scores.length):
        if not np.array_equal(scores.unary[t], row):
            raise ValueError("the path ILP needs unary rows 2..l to be identical (tied weights)")
    return row


def build_path_model(
    scores: ChainScores,
    cuts: Sequence[PathCut] = (),
    loss_truth: Optional[Sequence[int]] = None,
    solver_name: str = CBC,
) -> Model:
    """
    The MTZ path ILP as a python-mip model

    Objective: Σ_jk (pairwise[j][k] + unary[2][k]) u_jk. The start POI's own
    unary score is a constant and is left out.

    Args:
        scores: Chain scores with tied unary rows
        cuts: Paths to exclude, one constraint each
        loss_truth: When given, add Σ_{j>=2} (1 - Σ_k u_{k,y_j}) to the objective;
            its constant part becomes the objective constant
        solver_name: python-mip backend used for writing and solving

    Returns:
        Model with variables u_j_k, z_j, v_j and named constraints
    """
    m, l, s = scores.m, scores.length, scores.start
    unary = _tied_unary(scores)
    others = [j for j in range(m) if j != s]

    coef = scores.pairwise + unary[None, :]
    constant = 0.0
    if loss_truth is not None:
        truth = [int(p) for p in getattr(loss_truth, "pois", loss_truth)]
        if len(truth) != l or truth[0] != s:
            raise ValueError(f"loss truth {truth} does not conform to (start={s}, length={l})")
        coef = coef.copy()
        for y in truth[1:]:
            coef[:, y] -= 1.0
        constant = float(l - 1)

    model = Model(name=f"path_s{s}_l{l}", sense=MAXIMIZE, solver_name=solver_name)
    model.verbose = 0

    # ============ 变量 ============
    u = [[model.add_var(name=f"u_{j}_{k}", var_type=BINARY) for k in range(m)] for j in range(m)]
    z = [model.add_var(name=f"z_{j}", var_type=BINARY) for j in range(m)]
    v = [
        model.add_var(name=f"v_{j}", var_type=INTEGER, lb=1, ub=1) if j == s
        else model.add_var(name=f"v_{j}", var_type=INTEGER, lb=2, ub=m)
        for j in range(m)
    ]

    model.objective = xsum(float(coef[j, k]) * u[j][k] for j in range(m) for k in range(m)) + constant

    # ============ 约束 ============
    # path leaves the start, never enters it, and does not end there
    model.add_constr(xsum(u[s][k] for k in range(m)) == min(1, l - 1), name="start_out")
    model.add_constr(xsum(u[j][s] for j in range(m)) == 0, name="start_in")
    model.add_constr(z[s] == 0, name="start_terminal")
    # exactly l-1 transitions, no self loops
    model.add_constr(xsum(u[j][k] for j in range(m) for k in range(m)) == l - 1, name="n_transitions")
    model.add_constr(xsum(u[j][j] for j in range(m)) == 0, name="no_self")
    # each other POI entered at most once; out-degree plus terminal equals in-degree
    for i in others:
        model.add_constr(xsum(u[j][i] for j in range(m)) <= 1, name=f"in_{i}")
        model.add_constr(
            xsum(u[i][k] for k in range(m) if k != i) + z[i] - xsum(u[j][i] for j in range(m) if j != i) == 0,
            name=f"flow_{i}",
        )
    # MTZ ordering
    for j in others:
        for k in others:
            if j != k:
                model.add_constr(v[j] - v[k] + (m - 1) * u[j][k] <= m - 2, name=f"mtz_{j}_{k}")
    for index, cut in enumerate(cuts, start=1):
        path = cut.forbidden
        model.add_constr(xsum(u[a][b] for a, b in zip(path[:-1], path[1:])) <= l - 2, name=f"cut_{index}")

    return model


def export_ilp(
    scores: ChainScores,
    cuts: Sequence[PathCut],
    out: Union[str, Path],
    loss_truth: Optional[Sequence[int]] = None,
) -> Path:
    """
    Write the path ILP to ``out`` atomically

    Returns:
        The written path
    """
    target = Path(out)
    target.parent.mkdir(parents=True, exist_ok=True)
    model = build_path_model(scores, cuts, loss_truth)
    # the writer picks the format from the suffix and cuts the name at the first ".lp"
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.stem}.", suffix=".lp")
    os.close(fd)
    try:
        model.write(tmp)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logger.debug(f"LP written: {target} ({model.num_cols} vars, {model.num_rows} rows)")
    return target
