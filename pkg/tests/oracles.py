"""Independent numerical oracles used by the unit and acceptance tests.

Nothing here calls the library's gradient or optimizer code paths; gradients
come from central finite differences of the forward map, and the Adam trace
is recomputed from the bare recurrences.
"""

import numpy as np


def scalar_loss(net, x, coeff):
    """L = sum(coeff * net(x)) — linear in the output, so dL/dout = coeff."""
    out, _ = net.forward(x)
    return float((coeff * out).sum())


def fd_parameter_grads(net, x, coeff, h=1e-6):
    """Central finite differences of the scalar loss for every parameter."""
    grads = []
    for p in net.parameters():
        g = np.zeros_like(p)
        flat_p, flat_g = p.ravel(), g.ravel()
        for i in range(flat_p.size):
            orig = flat_p[i]
            flat_p[i] = orig + h
            up = scalar_loss(net, x, coeff)
            flat_p[i] = orig - h
            down = scalar_loss(net, x, coeff)
            flat_p[i] = orig
            flat_g[i] = (up - down) / (2.0 * h)
        grads.append(g)
    return grads


def fd_input_grad(net, x, coeff, h=1e-6):
    x = np.array(x, dtype=float)
    g = np.zeros_like(x)
    flat_x, flat_g = x.ravel(), g.ravel()
    for i in range(flat_x.size):
        orig = flat_x[i]
        flat_x[i] = orig + h
        up = scalar_loss(net, x, coeff)
        flat_x[i] = orig - h
        down = scalar_loss(net, x, coeff)
        flat_x[i] = orig
        flat_g[i] = (up - down) / (2.0 * h)
    return g


def max_rel_error(analytic, numeric, floor=1e-4):
    """Worst elementwise relative error, with the denominator floored so
    that near-zero gradients are compared absolutely at the floor scale."""
    worst = 0.0
    for a, n in zip(analytic, numeric):
        denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
        worst = max(worst, float((np.abs(a - n) / denom).max()))
    return worst


def scripted_adam_step(params, grads, mem, lr, beta1=0.9, beta2=0.999, eps=1e-8):
    """One textbook Adam step, in place. ``mem`` is {"m": [...], "v": [...], "t": int}."""
    mem["t"] += 1
    t = mem["t"]
    for p, g, m, v in zip(params, grads, mem["m"], mem["v"]):
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * g * g
        m_hat = m / (1.0 - beta1**t)
        v_hat = v / (1.0 - beta2**t)
        p -= lr * m_hat / (np.sqrt(v_hat) + eps)


def fresh_adam_mem(params):
    return {"m": [np.zeros_like(p) for p in params], "v": [np.zeros_like(p) for p in params], "t": 0}
