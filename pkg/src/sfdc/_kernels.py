"""Compiled inner loops for the layered encoders, decoders and simulators.

Every kernel works on dense code indices (``text[i]`` is an index into the
code arrays) and on ``uint64`` word arrays laid out MSB-first.  Pending-bit
stacks hold ``(position, next bit index)`` pairs, which is equivalent to
pushing a code's remaining bits in reverse order.
"""

import numpy as np
from numba import njit

ONE = np.uint64(1)

# decoder status codes
OK = 0
ERR_NO_CHILD = 1
ERR_TRUNCATED = 2


@njit(cache=True, inline="always")
def _get(words, i):
    return (words[i >> 6] >> np.uint64(63 - (i & 63))) & ONE


@njit(cache=True, inline="always")
def _set(words, i):
    words[i >> 6] |= ONE << np.uint64(63 - (i & 63))


@njit(cache=True, inline="always")
def _code_bit(code_val, code_len, c, h):
    return (code_val[c] >> np.uint64(code_len[c] - 1 - h)) & ONE


@njit(cache=True)
def pending_total(text, code_len, nfixed):
    total = 0
    for i in range(text.shape[0]):
        ell = code_len[text[i]]
        if ell > nfixed:
            total += ell - nfixed
    return total


@njit(cache=True)
def total_bits(text, code_len):
    total = 0
    for i in range(text.shape[0]):
        total += code_len[text[i]]
    return total


# standard layout -----------------------------------------------------------


@njit(cache=True)
def encode_standard(text, code_val, code_len, lam, record):
    """Fill ``lam - 1`` fixed layers and the dynamic layer.

    Returns ``(fixed, dyn, n_dyn, log)``; when ``record`` is set ``log`` has
    one ``(position, bit index, dynamic position)`` row per pending bit.
    """
    n = text.shape[0]
    nf = lam - 1
    npend = pending_total(text, code_len, nf)
    nw = (n + 63) >> 6
    fixed = np.zeros((nf, nw), np.uint64)
    dyn = np.zeros((n + npend + 63) >> 6, np.uint64)
    log = np.empty((npend if record else 0, 3), np.int64)
    sp = np.empty(64, np.int64)
    sh = np.empty(64, np.int64)
    top = 0
    li = 0
    last = -1
    i = 0
    while True:
        if i < n:
            c = text[i]
            ell = code_len[c]
            hmax = ell if ell < nf else nf
            for h in range(hmax):
                if _code_bit(code_val, code_len, c, h):
                    _set(fixed[h], i)
            if ell > nf:
                if top == sp.shape[0]:
                    sp = _grow(sp)
                    sh = _grow(sh)
                sp[top] = i
                sh[top] = nf
                top += 1
        elif top == 0:
            break
        if top > 0:
            p = sp[top - 1]
            h = sh[top - 1]
            c = text[p]
            if _code_bit(code_val, code_len, c, h):
                _set(dyn, i)
            if record:
                log[li, 0] = p
                log[li, 1] = h
                log[li, 2] = i
                li += 1
            last = i
            if h + 1 < code_len[c]:
                sh[top - 1] = h + 1
            else:
                top -= 1
        i += 1
    n_dyn = n if last + 1 < n else last + 1
    return fixed, dyn[: (n_dyn + 63) >> 6].copy(), n_dyn, log


@njit(cache=True)
def _grow(a):
    b = np.empty(2 * a.shape[0], a.dtype)
    b[: a.shape[0]] = a
    return b


@njit(cache=True)
def _grow_rows(a):
    b = np.empty((2 * a.shape[0], a.shape[1]), a.dtype)
    b[: a.shape[0]] = a
    return b


def new_sim_state():
    """``(state, stack)`` for the chunked simulators.

    ``state`` is ``[top, total delay, last written position]``; stack rows are
    ``(position, next bit index, code length)``.
    """
    return np.array([0, 0, -1], dtype=np.int64), np.empty((64, 3), dtype=np.int64)


@njit(cache=True)
def delay_standard_chunk(text, code_len, lam, base, state, stack, delays):
    """Advance the dynamic-layer simulation over ``text`` starting at position ``base``.

    ``state`` is updated in place; the stack may be reallocated and is
    returned.  Per-position delays go to ``delays`` (indexed by absolute
    position) when it is non-empty.
    """
    nf = lam - 1
    keep = delays.shape[0] > 0
    top = state[0]
    total = state[1]
    last = state[2]
    for t in range(text.shape[0]):
        i = base + t
        ell = code_len[text[t]]
        if ell > nf:
            if top == stack.shape[0]:
                stack = _grow_rows(stack)
            stack[top, 0] = i
            stack[top, 1] = nf
            stack[top, 2] = ell
            top += 1
        if top > 0:
            last = i
            if stack[top - 1, 1] + 1 < stack[top - 1, 2]:
                stack[top - 1, 1] += 1
            else:
                top -= 1
                p = stack[top, 0]
                total += i - p
                if keep:
                    delays[p] = i - p
    state[0] = top
    state[1] = total
    state[2] = last
    return stack


@njit(cache=True)
def delay_standard_flush(n, state, stack, delays):
    """Drain the pending bits left after position ``n - 1``; returns ``n_dyn``."""
    keep = delays.shape[0] > 0
    top = state[0]
    total = state[1]
    last = state[2]
    i = n
    while top > 0:
        last = i
        if stack[top - 1, 1] + 1 < stack[top - 1, 2]:
            stack[top - 1, 1] += 1
        else:
            top -= 1
            p = stack[top, 0]
            total += i - p
            if keep:
                delays[p] = i - p
        i += 1
    state[0] = top
    state[1] = total
    state[2] = last
    return n if last + 1 < n else last + 1


def delay_standard(text, code_len, lam, per_position):
    """Simulate the dynamic layer without materialising it.

    Returns ``(total delay, n_dyn, delays)``; the delay of a character is the
    dynamic position of its last pending bit minus its own position.
    """
    n = text.shape[0]
    delays = np.zeros(n if per_position else 0, np.int64)
    state, stack = new_sim_state()
    stack = delay_standard_chunk(text, code_len, lam, 0, state, stack, delays)
    n_dyn = delay_standard_flush(n, state, stack, delays)
    return int(state[1]), int(n_dyn), delays


@njit(cache=True, inline="always")
def _step(left, right, sym, x, bit):
    """One tree step; returns (node, resolved symbol or -1, status)."""
    nx = right[x] if bit else left[x]
    if nx < 0:
        # lenient trees: a marked internal node with no matching child
        if sym[x] >= 0:
            return x, sym[x], OK
        return x, -1, ERR_NO_CHILD
    if left[nx] < 0 and right[nx] < 0:
        return nx, sym[nx], OK
    return nx, -1, OK


@njit(cache=True)
def _decode_standard_into(fixed, dyn, n, n_dyn, nf, left, right, sym, i, j, out, delays):
    m = j - i + 1
    for t in range(m):
        out[t] = -1
    cap = 64
    sx = np.empty(cap, np.int64)
    sp = np.empty(cap, np.int64)
    top = 0
    done_j = False
    k = i
    while not (done_j and top == 0):
        if k < n:
            x = 0
            h = 0
            res = -1
            while h < nf:
                x, res, st = _step(left, right, sym, x, _get(fixed[h], k))
                if st != OK:
                    return st
                h += 1
                if res >= 0:
                    break
            if res >= 0:
                if k <= j:
                    out[k - i] = res
                    delays[k - i] = 0
                if k == j:
                    done_j = True
            else:
                if top == cap:
                    cap *= 2
                    nsx = np.empty(cap, np.int64)
                    nsp = np.empty(cap, np.int64)
                    nsx[:top] = sx[:top]
                    nsp[:top] = sp[:top]
                    sx = nsx
                    sp = nsp
                sx[top] = x
                sp[top] = k
                top += 1
        elif top == 0:
            return ERR_TRUNCATED
        if top > 0:
            if k >= n_dyn:
                return ERR_TRUNCATED
            x, res, st = _step(left, right, sym, sx[top - 1], _get(dyn, k))
            if st != OK:
                return st
            p = sp[top - 1]
            if res >= 0:
                top -= 1
                if p <= j:
                    out[p - i] = res
                    delays[p - i] = k - p
                if p == j:
                    done_j = True
            else:
                sx[top - 1] = x
        k += 1
    return OK


@njit(cache=True)
def decode_standard(fixed, dyn, n, n_dyn, lam, left, right, sym, i, j):
    out = np.empty(j - i + 1, np.int64)
    delays = np.zeros(j - i + 1, np.int64)
    st = _decode_standard_into(fixed, dyn, n, n_dyn, lam - 1, left, right, sym, i, j, out, delays)
    return st, out, delays


@njit(cache=True)
def access_standard(fixed, dyn, n, n_dyn, lam, left, right, sym, positions):
    m = positions.shape[0]
    out = np.empty(m, np.int64)
    delays = np.empty(m, np.int64)
    o = np.empty(1, np.int64)
    d = np.empty(1, np.int64)
    for t in range(m):
        p = positions[t]
        st = _decode_standard_into(fixed, dyn, n, n_dyn, lam - 1, left, right, sym, p, p, o, d)
        if st != OK:
            return st, out, delays
        out[t] = o[0]
        delays[t] = d[0]
    return OK, out, delays


# gamma layout --------------------------------------------------------------


@njit(cache=True)
def encode_gamma(text, code_val, code_len, lam, record):
    """Column-major fill of ``lam`` uniform layers.

    Returns ``(layers, n_gamma, log)``; log rows are
    ``(position, bit index, column, layer)``.
    """
    n = text.shape[0]
    nbits = total_bits(text, code_len)
    cap_cols = n + nbits // lam + 2
    layers = np.zeros((lam, (cap_cols + 63) >> 6), np.uint64)
    log = np.empty((nbits if record else 0, 4), np.int64)
    sp = np.empty(64, np.int64)
    sh = np.empty(64, np.int64)
    top = 0
    li = 0
    last = -1
    i = 0
    while True:
        if i < n:
            if top == sp.shape[0]:
                sp = _grow(sp)
                sh = _grow(sh)
            sp[top] = i
            sh[top] = 0
            top += 1
        h = 0
        while h < lam and top > 0:
            p = sp[top - 1]
            b = sh[top - 1]
            c = text[p]
            if _code_bit(code_val, code_len, c, b):
                _set(layers[h], i)
            if record:
                log[li, 0] = p
                log[li, 1] = b
                log[li, 2] = i
                log[li, 3] = h
                li += 1
            last = i
            if b + 1 < code_len[c]:
                sh[top - 1] = b + 1
            else:
                top -= 1
            h += 1
        if i >= n - 1 and top == 0:
            break
        i += 1
    n_gamma = n if last + 1 < n else last + 1
    return layers[:, : (n_gamma + 63) >> 6].copy(), n_gamma, log


@njit(cache=True)
def delay_gamma_chunk(text, code_len, lam, base, state, stack, delays):
    """Chunked column simulation of the uniform-layer variant (see the standard one)."""
    keep = delays.shape[0] > 0
    top = state[0]
    total = state[1]
    last = state[2]
    for t in range(text.shape[0]):
        i = base + t
        if top == stack.shape[0]:
            stack = _grow_rows(stack)
        stack[top, 0] = i
        stack[top, 1] = 0
        stack[top, 2] = code_len[text[t]]
        top += 1
        last = i
        h = 0
        while h < lam and top > 0:
            if stack[top - 1, 1] + 1 < stack[top - 1, 2]:
                stack[top - 1, 1] += 1
            else:
                top -= 1
                p = stack[top, 0]
                total += i - p
                if keep:
                    delays[p] = i - p
            h += 1
    state[0] = top
    state[1] = total
    state[2] = last
    return stack


@njit(cache=True)
def delay_gamma_flush(n, lam, state, stack, delays):
    keep = delays.shape[0] > 0
    top = state[0]
    total = state[1]
    last = state[2]
    i = n
    while top > 0:
        last = i
        h = 0
        while h < lam and top > 0:
            if stack[top - 1, 1] + 1 < stack[top - 1, 2]:
                stack[top - 1, 1] += 1
            else:
                top -= 1
                p = stack[top, 0]
                total += i - p
                if keep:
                    delays[p] = i - p
            h += 1
        i += 1
    state[0] = top
    state[1] = total
    state[2] = last
    return n if last + 1 < n else last + 1


def delay_gamma(text, code_len, lam, per_position):
    n = text.shape[0]
    delays = np.zeros(n if per_position else 0, np.int64)
    state, stack = new_sim_state()
    stack = delay_gamma_chunk(text, code_len, lam, 0, state, stack, delays)
    n_gamma = delay_gamma_flush(n, lam, state, stack, delays)
    return int(state[1]), int(n_gamma), delays


@njit(cache=True)
def _decode_gamma_into(layers, n, n_gamma, lam, left, right, sym, i, j, out, delays):
    m = j - i + 1
    for t in range(m):
        out[t] = -1
    cap = 64
    sx = np.empty(cap, np.int64)
    sp = np.empty(cap, np.int64)
    top = 0
    done_j = False
    k = i
    while not (done_j and top == 0):
        if k < n:
            if top == cap:
                cap *= 2
                nsx = np.empty(cap, np.int64)
                nsp = np.empty(cap, np.int64)
                nsx[:top] = sx[:top]
                nsp[:top] = sp[:top]
                sx = nsx
                sp = nsp
            sx[top] = 0
            sp[top] = k
            top += 1
        elif top == 0:
            return ERR_TRUNCATED
        if k >= n_gamma:
            return ERR_TRUNCATED
        h = 0
        while h < lam and top > 0:
            x, res, st = _step(left, right, sym, sx[top - 1], _get(layers[h], k))
            if st != OK:
                return st
            p = sp[top - 1]
            if res >= 0:
                top -= 1
                if p <= j:
                    out[p - i] = res
                    delays[p - i] = k - p
                if p == j:
                    done_j = True
            else:
                sx[top - 1] = x
            h += 1
        k += 1
    return OK


@njit(cache=True)
def decode_gamma(layers, n, n_gamma, lam, left, right, sym, i, j):
    out = np.empty(j - i + 1, np.int64)
    delays = np.zeros(j - i + 1, np.int64)
    st = _decode_gamma_into(layers, n, n_gamma, lam, left, right, sym, i, j, out, delays)
    return st, out, delays


@njit(cache=True)
def access_gamma(layers, n, n_gamma, lam, left, right, sym, positions):
    m = positions.shape[0]
    out = np.empty(m, np.int64)
    delays = np.empty(m, np.int64)
    o = np.empty(1, np.int64)
    d = np.empty(1, np.int64)
    for t in range(m):
        p = positions[t]
        st = _decode_gamma_into(layers, n, n_gamma, lam, left, right, sym, p, p, o, d)
        if st != OK:
            return st, out, delays
        out[t] = o[0]
        delays[t] = d[0]
    return OK, out, delays
