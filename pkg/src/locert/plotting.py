"""Figures for reports. Uses the non-interactive Agg backend."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_LABELS = {
    "coloring": ("k", "k"),
    "domination": ("t", "3*ceil(sqrt t)"),
    "matching": ("Delta", "2*Delta - 1"),
}


def plot_scaling_table(rows, path, prop: str):
    """Empirical minimum alphabet against the lower bound and the scheme bound."""
    xname, formula = _LABELS.get(prop, ("parameter", "formula"))
    xs = [r["parameter"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(xs, [r["formula"] for r in rows], "s--", color="tab:gray", label=f"upper: {formula}")
    ax.plot(xs, [r["lower_bound"] for r in rows], "v:", color="tab:blue", label="lower bound")
    done = [(r["parameter"], r["empirical_min"]) for r in rows if r.get("status") == "complete"]
    if done:
        ax.plot(*zip(*done), "o-", color="tab:red", label="empirical minimum")
    ax.set_xlabel(xname)
    ax.set_ylabel("distinct certificates")
    ax.set_xticks(xs)
    ax.set_title(f"{prop}: certificates needed")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    # no Software tag: PNG bytes do not depend on the matplotlib version
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def plot_certified_graph(G, symbols, path, seed: int = 0):
    """Draw ``G`` with vertices coloured by certificate."""
    import networkx as nx

    H = nx.Graph()
    H.add_nodes_from(G.vertices)
    H.add_edges_from(G.edge_list())
    pos = nx.spring_layout(H, seed=seed)
    fig, ax = plt.subplots(figsize=(5, 5))
    nx.draw_networkx(H, pos, ax=ax, node_color=list(symbols), cmap="tab10", node_size=260, font_size=7,
                     labels={v: str(symbols[v]) for v in G.vertices})
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
