#!/usr/bin/env python3
"""Regenerates the bundled scenario files. Run from any directory."""

import json
import pathlib

HERE = pathlib.Path(__file__).resolve().parent
MN = {"name": "MN1", "prefix": "10.1.1.1/32", "l2": "00:00:5e:00:01:01"}


def topology(areas, p1=False, aler_b=False, amrr_b=False):
    nodes, edges, regions = [], [], []

    def node(name, rid, role, area):
        nodes.append({"name": name, "rid": rid, "role": role, "area": area})

    def edge(a, b, ms=1.0):
        edges.append({"a": a, "b": b, "latencyMs": ms})

    for i in range(1, areas + 1):
        node(f"ALER{i}", f"20.1.1.{i}", "ALER", i)
        node(f"AMRR{i}", f"20.1.2.{i}", "AMRR", i)
        node(f"C{i}", f"20.1.4.{i}", "LSR", 0)
        edge(f"ALER{i}", f"C{i}")
        edge(f"AMRR{i}", f"C{i}")
        via = f"ALER{i}"
        if p1 and i == 3:
            node("P1", "20.1.3.1", "LSR", 3)
            edge("P1", "ALER3")
            via = "P1"
        for j in range(1, 4):
            ler = f"LER{i}{j}"
            node(ler, f"20.1.1.{10 * i + j}", "LER", i)
            edge(ler, via)
            if aler_b and i == 1:
                edge(ler, "ALER1B")
            regions.append({"id": f"MR{i}{j}", "ler": ler, "cells": [f"MR{i}{j}/c1", f"MR{i}{j}/c2"]})
    if aler_b:
        node("ALER1B", "20.1.1.101", "ALER", 1)
        edge("ALER1B", "C1")
    if amrr_b:
        node("AMRR1B", "20.1.2.101", "AMRR", 1)
        edge("AMRR1B", "C1")
    for a in range(1, areas + 1):
        for b in range(a + 1, areas + 1):
            edge(f"C{a}", f"C{b}", 2.0)
    return {"nodes": nodes, "edges": edges, "regions": regions}


def scenario(name, description, duration, topo, script, flows, flags=None, faults=None, analysis=None, stochastic=None):
    mobility = {"range": ["10.0.0.0/8"], "nodes": [MN], "script": script}
    if stochastic:
        mobility["stochastic"] = stochastic
    doc = {
        "name": name,
        "description": description,
        "duration": duration,
        "seed": 1,
        "topology": topo,
        "timers": {"keepalive": 3.0, "deadTime": 9.0, "lifetime": 300.0},
        "mobility": mobility,
        "flows": flows,
    }
    if flags:
        doc["flags"] = flags
    if faults:
        doc["faults"] = faults
    if analysis:
        doc["analysis"] = analysis
    return doc


def step(at, action, cell=None):
    s = {"at": at, "mn": "MN1", "action": action}
    if cell:
        s["cell"] = cell
    return s


def flow(fid, src, start, stop, rate=1000.0):
    return {"id": fid, "src": src, "dst": "MN1", "ratePps": rate, "start": start, "stop": stop}


def chain_adjacency(areas):
    adj = {}
    for i in range(1, areas + 1):
        for j in range(1, 4):
            near = [f"MR{i}{k}" for k in (j - 1, j + 1) if 1 <= k <= 3]
            if j == 3 and i < areas:
                near.append(f"MR{i + 1}1")
            if j == 1 and i > 1:
                near.append(f"MR{i - 1}3")
            adj[f"MR{i}{j}"] = near
    return adj


def build():
    three = topology(3, p1=True)
    out = {
        "startup": scenario(
            "startup", "MN1 starts up under LER12; a CN behind LER33 starts sending", 2.5, three,
            [step(0.1, "attach", "MR12/c1")], [flow("cn33", "LER33", 1.0, 1.5)]),
        "msf_local_handoff": scenario(
            "msf_local_handoff", "MN1 moves between two cells of LER12", 3.0, three,
            [step(0.1, "attach", "MR12/c1"), step(1.5, "move", "MR12/c2")], [flow("cn33", "LER33", 1.0, 2.5)]),
        "intra_area_handoff": scenario(
            "intra_area_handoff", "MN1 moves from LER12 to LER13 inside area 1", 3.0, three,
            [step(0.1, "attach", "MR12/c1"), step(1.5, "move", "MR13/c1")], [flow("cn33", "LER33", 1.0, 2.5)],
            flags={"overlapAttach": True}),
        "inter_area_handoff": scenario(
            "inter_area_handoff", "MN1 moves from LER13 in area 1 to LER21 in area 2", 3.0, three,
            [step(0.1, "attach", "MR13/c1"), step(1.5, "move", "MR21/c1")], [flow("cn33", "LER33", 1.0, 2.5)],
            flags={"overlapAttach": True}),
        "withdrawal": scenario(
            "withdrawal", "MN1 resets at LER12 and restarts under LER21; LER12 withdraws after the dead time",
            16.0, three,
            [step(0.1, "attach", "MR12/c1"), step(2.0, "reset"), step(2.1, "attach", "MR21/c1")],
            [flow("cn33", "LER33", 1.0, 15.0, 200.0)]),
        "ha_failover": scenario(
            "ha_failover", "Area 1 has two ALERs; ALER1B fails while two CNs send", 3.0,
            topology(3, p1=True, aler_b=True, amrr_b=True),
            [step(0.1, "attach", "MR12/c1")], [flow("cn33", "LER33", 1.0, 2.5), flow("cn22", "LER22", 1.0, 2.5)],
            faults=[{"at": 1.5, "node": "ALER1B"}]),
        "stochastic_walk": scenario(
            "stochastic_walk", "MN1 wanders over all nine regions", 30.0, three, [],
            [flow("cn33", "LER33", 1.0, 29.0, 100.0)], flags={"overlapAttach": True},
            stochastic=[{"mn": "MN1", "startRegion": "MR12", "start": 0.1, "mu": 1.0, "p": 0.8,
                         "adjacency": chain_adjacency(3)}]),
        "penalty_sweep": scenario(
            "penalty_sweep", "One CN behind LER33; hypothetical home agent at LER11", 2.0, three,
            [step(0.1, "attach", "MR12/c1")], [flow("cn33", "LER33", 1.0, 1.5, 20.0)],
            analysis={"ha": "LER11"}),
    }
    for areas in (3, 10):
        topo = topology(areas)
        out[f"scaling_intra_{areas}"] = scenario(
            f"scaling_intra_{areas}", f"Intra-area hand-off with {areas} areas", 3.0, topo,
            [step(0.1, "attach", "MR12/c1"), step(2.0, "move", "MR13/c1")], [flow("cn33", "LER33", 1.0, 2.5, 200.0)])
        out[f"scaling_inter_{areas}"] = scenario(
            f"scaling_inter_{areas}", f"Inter-area hand-off with {areas} areas", 3.0, topo,
            [step(0.1, "attach", "MR13/c1"), step(2.0, "move", "MR21/c1")], [flow("cn33", "LER33", 1.0, 2.5, 200.0)])
    return out


def main():
    for name, doc in build().items():
        (HERE / f"{name}.json").write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    main()
