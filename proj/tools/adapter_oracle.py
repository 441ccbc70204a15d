#!/usr/bin/env python3
"""Independent jax re-implementation of the toy adapter model.

Draws a small random model with numpy, evaluates losses, one step trace and
the autodiff gradient in float64, and writes everything as a golden fixture
for tests/test_adapter.cpp.
"""
import argparse
import json

import jax
import numpy as np

jax.config.update("jax_enable_x64", True)
import jax.numpy as jnp  # noqa: E402

ADAPTER_KEYS = ["W_h", "b_h", "W_c", "b_c", "W_s", "b_s", "W_g", "b_g", "W_k", "b_k", "W_r", "b_r"]


def draw(rng, H, V, m, users, tokens, attr_names):
    G = H
    shapes = {"W_h": (H, H), "b_h": (H,), "W_c": (H, H), "b_c": (H,), "W_s": (V, H), "b_s": (V,),
              "W_g": (G, V), "b_g": (G,), "W_k": (G, H), "b_k": (G,), "W_r": (V, G), "b_r": (V,)}
    adapter = {k: rng.normal(scale=0.5, size=s) for k, s in shapes.items()}
    decoder = {"W_in": rng.normal(scale=H ** -0.5, size=(H, H)), "W_ctx": rng.normal(scale=H ** -0.5, size=(H, H)),
               "b": rng.normal(scale=0.1, size=H)}
    frozen = {"embed": rng.normal(size=(V, H)), "W_o": rng.normal(size=(V, H)), "b_o": rng.normal(scale=0.1, size=V)}
    us = []
    for u in range(users):
        k = 1 + u % 3
        names = sorted(rng.choice(attr_names, size=k, replace=False).tolist(), key=attr_names.index)
        seq = rng.integers(0, V, size=tokens + 1)
        us.append({"user_id": f"u{u}", "p": rng.normal(scale=0.5, size=(m, H)), "attrs": names,
                   "a": rng.normal(scale=0.5, size=(k, H)), "tokens": seq[:-1].tolist(), "targets": seq[1:].tolist()})
    return adapter, decoder, frozen, us


def forward(adapter, ps, as_, decoder, frozen, users, tau, alpha, include_positive, renormalize, want_trace=False):
    l_imp = 0.0
    anchors, hidden = [], []
    trace = None
    for ui, u in enumerate(users):
        p = ps[ui]
        ctx = p.mean(axis=0)
        x = jnp.concatenate([p, frozen["embed"][jnp.array(u["tokens"])]], axis=0)
        h = jnp.tanh(x @ decoder["W_in"].T + ctx @ decoder["W_ctx"].T + decoder["b"])
        s = (h @ adapter["W_h"].T + adapter["b_h"]) @ adapter["W_c"].T + adapter["b_c"]
        m = p.shape[0]
        for k, y in enumerate(u["targets"]):
            t = m + k
            p_s = jax.nn.softmax(adapter["W_s"] @ s[t] + adapter["b_s"])
            sp = jax.nn.relu(adapter["W_g"] @ p_s + adapter["b_g"])
            hp = adapter["W_k"] @ h[t] + adapter["b_k"]
            g = jax.nn.sigmoid(adapter["W_r"] @ (sp + hp) + adapter["b_r"])
            p_o = jax.nn.softmax(frozen["W_o"] @ h[t] + frozen["b_o"])
            raw = g * p_s + (1 - g) * p_o
            final = raw / raw.sum() if renormalize else raw
            l_imp = l_imp - jnp.log(final[y])
            if want_trace and ui == 0 and k == 0:
                trace = {"h": h, "s": s, "p_s": p_s, "g": g, "p": final}
        anchors.append(p.mean(axis=0) + as_[ui].mean(axis=0))
        hidden.append(s.mean(axis=0))
    A = jnp.stack(anchors)
    S = jnp.stack(hidden)
    corr = (A / jnp.linalg.norm(A, axis=1, keepdims=True)) @ (S / jnp.linalg.norm(S, axis=1, keepdims=True)).T
    logits = corr / tau
    K = logits.shape[0]
    if not include_positive:
        logits = jnp.where(jnp.eye(K, dtype=bool), -jnp.inf, logits)
    l_cl = jnp.mean(-(jnp.diag(corr) / tau - jax.scipy.special.logsumexp(logits, axis=1)))
    total = l_imp + alpha * l_cl
    return (l_imp, l_cl, total), trace


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("-o", "--output", default="tests/data/adapter_golden.json")
    args = ap.parse_args()
    attr_names = ["NoLineWrap", "AvoidStarImport", "OneTopLevelClass", "UpperEll", "TypeName", "MethodName"]
    rng = np.random.default_rng(args.seed)
    H, V, m, users, tokens = 4, 6, 5, 3, 4
    adapter, decoder, frozen, us = draw(rng, H, V, m, users, tokens, attr_names)
    tau, alpha = 0.5, 0.55

    adapter_j = {k: jnp.asarray(v) for k, v in adapter.items()}
    ps = [jnp.asarray(u["p"]) for u in us]
    as_ = [jnp.asarray(u["a"]) for u in us]
    dec_j = {k: jnp.asarray(v) for k, v in decoder.items()}
    fro_j = {k: jnp.asarray(v) for k, v in frozen.items()}

    losses = []
    for include_positive in (True, False):
        for renormalize in (True, False):
            (l_imp, l_cl, total), _ = forward(adapter_j, ps, as_, dec_j, fro_j, us, tau, alpha, include_positive,
                                              renormalize)
            losses.append({"include_positive": include_positive, "renormalize": renormalize, "l_imp": float(l_imp),
                           "l_cl": float(l_cl), "total": float(total)})

    def total_fn(a, p, q):
        return forward(a, p, q, dec_j, fro_j, us, tau, alpha, True, True)[0][2]

    ga, gp, gq = jax.grad(total_fn, argnums=(0, 1, 2))(adapter_j, ps, as_)
    flat = [float(v) for k in ADAPTER_KEYS for v in np.ravel(ga[k])]
    flat += [float(v) for g in gp for v in np.ravel(g)]
    flat += [float(v) for g in gq for v in np.ravel(g)]

    _, tr = forward(adapter_j, ps, as_, dec_j, fro_j, us, tau, alpha, True, True, want_trace=True)

    def lst(x):
        return np.asarray(x).tolist()

    out = {
        "H": H, "V": V, "tau": tau, "alpha": alpha,
        "adapter": {k: lst(v) for k, v in adapter.items()},
        "decoder": {k: lst(v) for k, v in decoder.items()},
        "embed": lst(frozen["embed"]), "W_o": lst(frozen["W_o"]), "b_o": lst(frozen["b_o"]),
        "users": [{"user_id": u["user_id"], "p": lst(u["p"]), "attrs": u["attrs"], "a": lst(u["a"]),
                   "tokens": u["tokens"], "targets": u["targets"]} for u in us],
        "expected": {
            "losses": losses,
            "gradient": flat,
            "user0_hidden": lst(tr["h"]),
            "user0_style_hidden": lst(tr["s"]),
            "user0_step0": {"p_s": lst(tr["p_s"]), "g": lst(tr["g"]), "p": lst(tr["p"])},
        },
    }
    with open(args.output, "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
