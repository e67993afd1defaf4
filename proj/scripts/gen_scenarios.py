#!/usr/bin/env python3
"""Writes the bundled scenario files into scenarios/.

Every scenario is deterministic; rerunning this script reproduces the same
bytes. The expected outcome of each scenario is noted next to its builder.
"""
import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "scenarios"

THROUGHPUT = {
    "T-4G": [[-130, 1], [-110, 10], [-90, 30], [-70, 40]],
    "S-4G": [[-130, 0.5], [-110, 4], [-90, 14], [-70, 20]],
    "T-3G": [[-130, 0.3], [-110, 2], [-90, 6], [-70, 8]],
    "S-3G": [[-130, 0.2], [-110, 1], [-90, 3], [-70, 4]],
}
LATENCY = {
    "T-4G": [[-130, 300], [-110, 80], [-90, 40], [-70, 30]],
    "S-4G": [[-130, 400], [-110, 120], [-90, 60], [-70, 45]],
    "T-3G": [[-130, 500], [-110, 150], [-90, 90], [-70, 80]],
    "S-3G": [[-130, 600], [-110, 200], [-90, 120], [-70, 100]],
}
QOS = {
    "T-4G": {"traffic_class": "Interactive", "delay_class": 3, "max_dl_rate": 40, "max_ul_rate": 10},
    "T-3G": {"traffic_class": "Interactive", "delay_class": 2, "max_dl_rate": 8, "max_ul_rate": 2},
    "S-4G": {"traffic_class": "Background", "delay_class": 4, "max_dl_rate": 20, "max_ul_rate": 5},
    "S-3G": {"traffic_class": "Background", "delay_class": 4, "max_dl_rate": 4, "max_ul_rate": 1},
}


def interp(curve, x):
    if x <= curve[0][0]:
        return curve[0][1]
    if x >= curve[-1][0]:
        return curve[-1][1]
    for (x0, y0), (x1, y1) in zip(curve, curve[1:]):
        if x0 <= x <= x1:
            return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    raise AssertionError


def cell(cell_id, network, band="B1", scan_time=0.4, attach_time=2.6, **kw):
    sib = {"barred": False, "paging_cycle": 1.28, "on_duration": 0.1, "reselection_priority": 0,
           "reselection_threshold": -120.0, "voice_over_ps": True}
    sib.update(kw.pop("sib", {}))
    c = {"cell_id": cell_id, "network": network, "band": band, "scan_time": scan_time,
         "attach_time": attach_time, "sib": sib}
    c.update(kw)
    return c


def network(net_id, plmn, rat, cells):
    return {"network_id": net_id, "plmn": plmn, "rat": rat, "cells": cells}


def perf(nets):
    return {"outage": {"latency": 1000.0, "throughput": 0.0},
            "networks": {n: {"throughput": THROUGHPUT[n], "latency": LATENCY[n]} for n in nets}}


def history_grid(nets, lo=-135, hi=-70, step=5):
    out = []
    for n in nets:
        for r in range(lo, hi + 1, step):
            out.append({"network": n, "rss": float(r), "latency": interp(LATENCY[n], r),
                        "throughput": interp(THROUGHPUT[n], r)})
    return out


def segments(values, length, ramp=0.01):
    """Piecewise-constant RSS trace with short linear ramps between segments."""
    pts = []
    for i, v in enumerate(values):
        start = i * length
        pts.append([start + (ramp if i else 0.0), float(v)])
        pts.append([start + length, float(v)])
    return pts


def four_network_cells(nets, barred=None):
    barred = barred or {}
    cells = []
    for n in nets:
        cells.append(cell(f"{n}-c1", n, band="B3" if "4G" in n else "B1", qos=QOS[n],
                          sib={"voice_over_ps": "4G" not in n or n.startswith("T"), **barred.get(n, {})}))
    return cells


def base(name, nets, horizon, priority, initial, seed=7):
    return {"name": name, "seed": seed, "horizon": horizon, "service_floor": -140.0,
            "platform_overhead": 0.0, "attach_failure_probability": 0.0,
            "networks": [network(n, n.split("-")[0], n.split("-")[1], [f"{n}-c1"]) for n in nets],
            "cells": four_network_cells(nets), "trace": {}, "workload": [], "performance": perf(nets),
            "baseline": {"plmn_priority_list": priority}, "device": {"initial_registration": initial,
                                                                   "inactivity_tail": 0.5},
            "history": history_grid(nets), "billing": {},
            "requirements": {"needs_voice": False, "needs_data": True}}


# Ground truth depends on RSS and on the class each carrier hands out, so
# neither RSS alone nor the profile alone tracks the optimum.
def benchmark():
    nets = ["T-4G", "T-3G", "S-4G", "S-3G"]
    sc = base("benchmark", nets, 720.0, nets, "T-4G")
    seg = {  # (T-4G, S-4G, T-3G, S-3G) per 120 s segment
        "T-4G": [-95, -125, -100, -130, -115, -135],
        "S-4G": [-85, -85, -90, -95, -122, -125],
        "T-3G": [-100, -110, -100, -95, -85, -80],
        "S-3G": [-100, -100, -100, -100, -90, -90],
    }
    sc["trace"] = {f"{n}-c1": segments(seg[n], 120.0) for n in nets}
    sc["workload"] = [{"arrival_time": float(t), "direction": "DOWNLINK" if i % 2 == 0 else "UPLINK",
                       "duration": 2.0} for i, t in enumerate(range(15, 720, 45))]
    sc["billing"] = {"T": {"tiers": [{"up_to": 5.0, "price": 10.0}, {"up_to": None, "price": 15.0}], "usage": 2.0},
                     "S": {"tiers": [{"up_to": None, "price": 8.0}], "usage": 0.0}}
    return sc


# Two segments: the home 4G weakens but stays in service (no move), then drops
# out while a stronger other-carrier 4G is around (home 3G is taken).
def carrier_inertia():
    nets = ["T-4G", "T-3G", "S-4G"]
    sc = base("carrier_inertia", nets, 120.0, nets, "T-4G")
    sc["trace"] = {
        "T-4G-c1": [[0.0, -125.0], [60.0, -125.0], [62.0, -150.0], [120.0, -150.0]],
        "T-3G-c1": [[0.0, -150.0], [58.0, -150.0], [60.0, -105.0], [120.0, -105.0]],
        "S-4G-c1": [[0.0, -85.0], [60.0, -85.0], [62.0, -80.0], [120.0, -80.0]],
    }
    return sc


# One target cell: n_t = 1, 0.4 s scan, 2.6 s attach.
def direct_switch(overhead=0.0, name="direct_switch"):
    nets = ["T-4G", "S-4G"]
    sc = base(name, nets, 60.0, nets, "T-4G")
    sc["platform_overhead"] = overhead
    sc["trace"] = {"T-4G-c1": [[0.0, -110.0], [60.0, -110.0]], "S-4G-c1": [[0.0, -80.0], [60.0, -80.0]]}
    sc["history"] = history_grid(nets)
    return sc


# 36 cells on four carriers; the home carrier vanishes at t=5 and the legacy
# procedure sweeps every band before attaching elsewhere.
def baseline36():
    layout = {"A-4G": 10, "B-4G": 12, "C-4G": 8, "D-4G": 6}
    sc = {"name": "baseline36", "seed": 3, "horizon": 60.0, "service_floor": -140.0,
          "platform_overhead": 0.0, "attach_failure_probability": 0.0,
          "networks": [], "cells": [], "trace": {}, "workload": [],
          "performance": {"outage": {"latency": 1000.0, "throughput": 0.0}, "networks": {}},
          "baseline": {"plmn_priority_list": list(layout)},
          "device": {"initial_registration": "A-4G", "inactivity_tail": 0.0},
          "history": [], "billing": {}, "requirements": {"needs_voice": False, "needs_data": True}}
    for n, count in layout.items():
        ids = [f"{n}-c{i:02d}" for i in range(count)]
        sc["networks"].append(network(n, n[0], "4G", ids))
        for i, cid in enumerate(ids):
            sc["cells"].append(cell(cid, n, band=f"B{i % 4 + 1}"))
            if n == "A-4G":
                sc["trace"][cid] = [[0.0, -90.0], [5.0, -90.0], [5.0 + 1e-6, -150.0], [60.0, -150.0]]
            else:
                sc["trace"][cid] = [[0.0, -95.0 + i], [60.0, -95.0 + i]]
        sc["performance"]["networks"][n] = {"throughput": THROUGHPUT["T-4G"], "latency": LATENCY["T-4G"]}
    return sc


# Four carriers, 20 cells; the two requested ones hold 10 of them.
def minimal_search():
    layout = {"A-4G": 6, "B-4G": 5, "C-4G": 5, "D-4G": 4}
    sc = baseline36()
    sc.update({"name": "minimal_search", "networks": [], "cells": [], "trace": {},
               "performance": {"outage": {"latency": 1000.0, "throughput": 0.0}, "networks": {}},
               "baseline": {"plmn_priority_list": list(layout)}})
    for n, count in layout.items():
        ids = [f"{n}-c{i:02d}" for i in range(count)]
        sc["networks"].append(network(n, n[0], "4G", ids))
        for i, cid in enumerate(ids):
            sc["cells"].append(cell(cid, n, band=f"B{i % 3 + 1}"))
            sc["trace"][cid] = [[0.0, -100.0 + 2 * i], [60.0, -100.0 + 2 * i]]
        sc["performance"]["networks"][n] = {"throughput": THROUGHPUT["T-4G"], "latency": LATENCY["T-4G"]}
    return sc


def fault(name, rss, barred=False, voice=False, b3g=None, b4g_threshold=-120.0):
    """Home A-4G plus candidate carrier B (4G, optionally 3G)."""
    nets = ["A-4G", "B-4G", "B-3G"]
    sc = {"name": name, "seed": 5, "horizon": 30.0, "service_floor": -140.0, "platform_overhead": 0.0,
          "attach_failure_probability": 0.0,
          "networks": [network("A-4G", "A", "4G", ["A-4G-c1"]),
                       network("B-4G", "B", "4G", ["B-4G-c1", "B-4G-c2"]),
                       network("B-3G", "B", "3G", ["B-3G-c1"])],
          "cells": [cell("A-4G-c1", "A-4G", qos=QOS["T-4G"]),
                    cell("B-4G-c1", "B-4G", band="B3", qos=QOS["S-4G"],
                         sib={"barred": barred, "voice_over_ps": False, "reselection_threshold": b4g_threshold}),
                    cell("B-4G-c2", "B-4G", band="B7", qos=QOS["S-4G"],
                         sib={"barred": barred, "voice_over_ps": False, "reselection_threshold": b4g_threshold}),
                    cell("B-3G-c1", "B-3G", qos=QOS["S-3G"])],
          "trace": {"A-4G-c1": [[0.0, -100.0], [30.0, -100.0]],
                    "B-4G-c1": [[0.0, rss], [30.0, rss]],
                    "B-4G-c2": [[0.0, rss - 3.0], [30.0, rss - 3.0]],
                    "B-3G-c1": [[0.0, b3g if b3g is not None else -150.0], [30.0, b3g if b3g is not None else -150.0]]},
          "workload": [],
          "performance": {"outage": {"latency": 1000.0, "throughput": 0.0},
                          "networks": {"A-4G": {"throughput": THROUGHPUT["T-4G"], "latency": LATENCY["T-4G"]},
                                       "B-4G": {"throughput": THROUGHPUT["S-4G"], "latency": LATENCY["S-4G"]},
                                       "B-3G": {"throughput": THROUGHPUT["S-3G"], "latency": LATENCY["S-3G"]}}},
          "baseline": {"plmn_priority_list": nets},
          "device": {"initial_registration": "A-4G", "inactivity_tail": 0.0},
          "history": [{"network": n, "rss": -100.0, "latency": 100.0, "throughput": 5.0} for n in nets],
          "billing": {}, "requirements": {"needs_voice": voice, "needs_data": True}}
    return sc


def main():
    OUT.mkdir(exist_ok=True)
    scenarios = {
        "benchmark": benchmark(),
        "carrier_inertia": carrier_inertia(),
        "direct_switch": direct_switch(),
        "lower_bound_gap": direct_switch(7.3, "lower_bound_gap"),
        "baseline36": baseline36(),
        "minimal_search": minimal_search(),
        "fault_barred": fault("fault_barred", -90.0, barred=True),
        "fault_barred_control": fault("fault_barred_control", -90.0),
        "fault_csfb": fault("fault_csfb", -90.0, voice=True),
        "fault_csfb_control": fault("fault_csfb_control", -90.0, voice=True, b3g=-100.0),
        "fault_threshold": fault("fault_threshold", -125.0, b3g=-95.0),
        "fault_threshold_control": fault("fault_threshold_control", -90.0, b3g=-95.0),
    }
    for name, sc in scenarios.items():
        (OUT / f"{name}.json").write_text(json.dumps(sc, indent=1) + "\n")
    print(f"wrote {len(scenarios)} scenarios to {OUT}")


if __name__ == "__main__":
    main()
