"""Shared fixtures"""

import math

import numpy as np
import pytest

from .helpers import make_dataset, make_table


@pytest.fixture
def rng():
    """固定种子的随机数生成器"""
    return np.random.default_rng(20240611)


@pytest.fixture
def toy_table():
    """5 个 POI, 两个类别, 严格递增的人气"""
    return make_table(
        categories=["museum", "park", "museum", "park", "museum"],
        coords=[(0.0, 0.0), (0.01, 0.0), (0.02, 0.01), (0.0, 0.02), (0.03, 0.03)],
        popularity=[5, 4, 3, 2, 1],
        n_visits=[9, 7, 5, 3, 1],
    )


@pytest.fixture
def toy_dataset(toy_table):
    """4 个查询, 其中一个有两条 ground truth"""
    return make_dataset(toy_table, [
        (0, 1, 2),
        (0, 2, 1),
        (1, 0, 3),
        (2, 3, 4, 0),
        (3, 4),
    ])


@pytest.fixture
def circle_dataset():
    """
    8 个类别各不相同的 POI 排成一圈; 每个查询的 ground truth 沿圈顺时针前进

    A pairwise category weight on (c_i, c_{i+1}) separates every query.
    """
    m = 8
    coords = [(math.cos(2 * math.pi * i / m) * 0.05, math.sin(2 * math.pi * i / m) * 0.05) for i in range(m)]
    table = make_table(categories=[f"c{i}" for i in range(m)], coords=coords,
                       popularity=[3] * m, n_visits=[3] * m)
    queries = [(s, 3) for s in range(8)] + [(s, 4) for s in (0, 2, 4, 6)]
    trajectories = [tuple((s + j) % m for j in range(l)) for s, l in queries]
    return make_dataset(table, trajectories)


@pytest.fixture
def csv_corpus(tmp_path):
    """写出一个小的 POI/轨迹 CSV 语料"""
    poi_file = tmp_path / "pois.csv"
    poi_file.write_text(
        "poi_id,category,lon,lat\n"
        "10,museum,144.96,-37.81\n"
        "11,park,144.97,-37.82\n"
        "12,museum,144.98,-37.80\n"
        "13,shop,144.95,-37.83\n"
    )
    traj_file = tmp_path / "traj.csv"
    traj_file.write_text(
        "user_id,traj_id,seq_index,poi_id,arrival_ts,departure_ts\n"
        "u1,t1,0,10,0,100\n"
        "u1,t1,1,11,200,260\n"
        "u1,t1,2,12,300,420\n"
        "u2,t2,0,10,0,50\n"
        "u2,t2,1,12,100,200\n"
        "u2,t2,2,11,300,320\n"
        "u3,t3,0,13,0,10\n"
        "u3,t3,1,10,20,80\n"
        "u2,t4,0,11,0,30\n"
    )
    return traj_file, poi_file


@pytest.fixture
def held_out_corpus(tmp_path):
    """
    POI 3 和 4 只出现在查询 (0, 3) 的轨迹里

    Three users walk (0, 3, 4); the other queries only visit POIs 1 and 2.
    """
    poi_file = tmp_path / "pois.csv"
    poi_file.write_text(
        "poi_id,category,lon,lat\n"
        "0,museum,144.96,-37.81\n"
        "1,park,144.97,-37.82\n"
        "2,museum,144.98,-37.80\n"
        "3,shop,144.95,-37.83\n"
        "4,park,144.99,-37.84\n"
    )
    rows = ["user_id,traj_id,seq_index,poi_id"]
    for user in ("u1", "u2", "u3"):
        rows += [f"{user},{user}a,0,0", f"{user},{user}a,1,3", f"{user},{user}a,2,4"]
    rows += ["u4,t4,0,1", "u4,t4,1,2", "u5,t5,0,2", "u5,t5,1,1"]
    traj_file = tmp_path / "traj.csv"
    traj_file.write_text("\n".join(rows) + "\n")
    return traj_file, poi_file
