"""Scoring models for triples and relation paths.

Six models share one interface.  Entity and relation parameters live in two
dense tables (``entity[i]`` and ``relation[r]``) whose per-row shape depends
on the model:

==========  =====================  ===========================
kind        entity row             relation row
==========  =====================  ===========================
blockhole   complex ``(b, m)``     complex ``(b, b, m)``
complex     complex ``(n,)``       complex ``(n,)``
distmult    real ``(n,)``          real ``(n,)``
rescal      real ``(n,)``          real ``(n, n)``
hole        real ``(n,)``          real ``(n,)``
transe      real ``(n,)``          real ``(n,)``
==========  =====================  ===========================

Gradients of complex parameters are packed as ``d/dRe + 1j * d/dIm``, i.e.
real and imaginary parts are independent real coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph import GraphError

MODEL_KINDS = ("blockhole", "rescal", "distmult", "complex", "hole", "transe")


@dataclass
class Gradient:
    """Sparse gradient: only rows of entities/relations that were touched."""

    entity: dict = field(default_factory=dict)
    relation: dict = field(default_factory=dict)

    def add_entity(self, i: int, g: np.ndarray) -> None:
        i = int(i)
        if i in self.entity:
            self.entity[i] = self.entity[i] + g
        else:
            self.entity[i] = np.array(g, copy=True)

    def add_relation(self, r: int, g: np.ndarray) -> None:
        r = int(r)
        if r in self.relation:
            self.relation[r] = self.relation[r] + g
        else:
            self.relation[r] = np.array(g, copy=True)

    def add(self, other: "Gradient", scale: float = 1.0) -> None:
        for i, g in other.entity.items():
            self.add_entity(i, scale * g)
        for r, g in other.relation.items():
            self.add_relation(r, scale * g)


class Model:
    """Base: parameter tables plus scoring/gradient entry points."""

    kind: str = ""
    is_complex = False

    def __init__(self, entity: np.ndarray, relation: np.ndarray, dims: dict):
        self.entity = entity
        self.relation = relation
        self.dims = dict(dims)

    @property
    def num_entities(self) -> int:
        return self.entity.shape[0]

    @property
    def num_relations(self) -> int:
        return self.relation.shape[0]

    def num_real_params(self) -> int:
        factor = 2 if self.is_complex else 1
        return factor * (self.entity.size + self.relation.size)

    def copy(self) -> "Model":
        return type(self)(self.entity.copy(), self.relation.copy(), self.dims)

    def _check(self, s: int, path: Sequence[int], objects) -> None:
        if len(path) == 0:
            raise ValueError("path must contain at least one relation")
        ne, nr = self.num_entities, self.num_relations
        if not 0 <= s < ne:
            raise GraphError(f"unknown entity id {s}")
        for r in path:
            if not 0 <= r < nr:
                raise GraphError(f"unknown relation id {r}")
        objects = np.asarray(objects)
        if objects.size and (objects.min() < 0 or objects.max() >= ne):
            raise GraphError("unknown object entity id")

    # public API -------------------------------------------------------

    def score_objects(self, s: int, path: Sequence[int], objects) -> np.ndarray:
        """Scores of ``(s, path, o)`` for every ``o`` in ``objects``."""
        objects = np.asarray(objects, dtype=np.int64).reshape(-1)
        self._check(s, path, objects)
        return self._score_objects(s, tuple(path), objects)

    def score_path(self, s: int, path: Sequence[int], o: int) -> float:
        return float(self.score_objects(s, path, [o])[0])

    def score_triple(self, s: int, r: int, o: int) -> float:
        return self.score_path(s, (r,), o)

    def score_batch(self, subjects, relations, objects) -> np.ndarray:
        """Scores of independent triples ``(subjects[i], relations[i], objects[i])``."""
        subjects, relations, objects = (np.asarray(a, dtype=np.int64).reshape(-1) for a in (subjects, relations, objects))
        if not subjects.shape == relations.shape == objects.shape:
            raise ValueError("subjects, relations and objects must have equal length")
        if subjects.size == 0:
            return np.zeros(0)
        ne, nr = self.num_entities, self.num_relations
        for ids, bound, what in ((subjects, ne, "entity"), (objects, ne, "entity"), (relations, nr, "relation")):
            if ids.min() < 0 or ids.max() >= bound:
                raise GraphError(f"unknown {what} id in batch")
        return self._score_batch(subjects, relations, objects)

    def _score_batch(self, subjects, relations, objects):
        return np.array([self._score_objects(int(s), (int(r),), np.array([o]))[0] for s, r, o in zip(subjects, relations, objects)])

    def weighted_grad(self, s: int, path: Sequence[int], objects, coefs) -> Gradient:
        """Gradient of ``sum_j coefs[j] * score(s, path, objects[j])``."""
        objects = np.asarray(objects, dtype=np.int64).reshape(-1)
        coefs = np.asarray(coefs, dtype=np.float64).reshape(-1)
        if objects.shape != coefs.shape:
            raise ValueError("objects and coefs must have equal length")
        self._check(s, path, objects)
        return self._weighted_grad(s, tuple(path), objects, coefs)

    def grad_path(self, s: int, path: Sequence[int], o: int) -> Gradient:
        return self.weighted_grad(s, path, [o], [1.0])

    def grad_triple(self, s: int, r: int, o: int) -> Gradient:
        return self.grad_path(s, (r,), o)

    def _score_objects(self, s, path, objects):  # pragma: no cover - abstract
        raise NotImplementedError

    def _weighted_grad(self, s, path, objects, coefs):  # pragma: no cover - abstract
        raise NotImplementedError


class BilinearModel(Model):
    """Scores ``Re(e_s^T R_1 ... R_k conj(e_o))`` without forming any matrix.

    Subclasses supply the row-vector action ``u -> u R``, the column action
    ``v -> R v`` and the packed gradient of ``Re(u R v)`` with respect to
    the parameters of ``R``.
    """

    def _left(self, u, w):
        raise NotImplementedError

    def _right(self, w, v):
        raise NotImplementedError

    def _rel_grad(self, u, v):
        raise NotImplementedError

    def _forward(self, s, path):
        us = [self.entity[s]]
        for r in path:
            us.append(self._left(us[-1], self.relation[r]))
        return us

    def _score_objects(self, s, path, objects):
        u = self._forward(s, path)[-1]
        eo = self.entity[objects]
        axes = tuple(range(1, eo.ndim))
        if self.is_complex:
            return np.real(np.sum(u * np.conj(eo), axis=axes))
        return np.sum(u * eo, axis=axes)

    def _left_batch(self, u, w):
        return self._left(u, w)

    def _score_batch(self, subjects, relations, objects):
        u = self._left_batch(self.entity[subjects], self.relation[relations])
        eo = self.entity[objects]
        axes = tuple(range(1, eo.ndim))
        if self.is_complex:
            return np.real(np.sum(u * np.conj(eo), axis=axes))
        return np.sum(u * eo, axis=axes)

    def _weighted_grad(self, s, path, objects, coefs):
        us = self._forward(s, path)
        eo = self.entity[objects]
        shape = (-1,) + (1,) * (eo.ndim - 1)
        # score is linear in conj(e_o), so weighted objects collapse to one vector
        v = np.sum(coefs.reshape(shape) * (np.conj(eo) if self.is_complex else eo), axis=0)
        grad = Gradient()
        for t in range(len(path), 0, -1):
            w = self.relation[path[t - 1]]
            grad.add_relation(path[t - 1], self._rel_grad(us[t - 1], v))
            v = self._right(w, v)
        grad.add_entity(s, np.conj(v) if self.is_complex else v)
        u_last = us[-1]
        for o, c in zip(objects, coefs):
            grad.add_entity(o, c * u_last)
        return grad


class DistMult(BilinearModel):
    kind = "distmult"

    def _left(self, u, w):
        return u * w

    def _right(self, w, v):
        return w * v

    def _rel_grad(self, u, v):
        return u * v


class ComplEx(BilinearModel):
    kind = "complex"
    is_complex = True

    def _left(self, u, w):
        return u * w

    def _right(self, w, v):
        return w * v

    def _rel_grad(self, u, v):
        return np.conj(u * v)


class RESCAL(BilinearModel):
    kind = "rescal"

    def _left(self, u, w):
        return u @ w

    def _left_batch(self, u, w):
        return np.matmul(u[:, None, :], w)[:, 0, :]

    def _right(self, w, v):
        return w @ v

    def _rel_grad(self, u, v):
        return np.outer(u, v)


class BlockHolE(BilinearModel):
    """Block-circulant relations trained directly in the Fourier domain.

    A relation is ``b x b`` blocks of diagonal complex matrices; an entity is
    ``b`` complex blocks of length ``m``.  One hop costs ``b^2 m`` complex
    multiplies.
    """

    kind = "blockhole"
    is_complex = True

    def _left(self, u, w):
        # (u W)[j, c] = sum_i u[i, c] w[i, j, c]
        return np.einsum("ic,ijc->jc", u, w)

    def _left_batch(self, u, w):
        return (u[:, :, None, :] * w).sum(axis=1)

    def _right(self, w, v):
        return np.einsum("ijc,jc->ic", w, v)

    def _rel_grad(self, u, v):
        return np.conj(u[:, None, :] * v[None, :, :])


class TransE(Model):
    """Negated squared distance ``-||e_s + w_1 + ... + w_k - e_o||^2``."""

    kind = "transe"

    def _base(self, s, path):
        d = self.entity[s].copy()
        for r in path:
            d = d + self.relation[r]
        return d

    def _score_objects(self, s, path, objects):
        diff = self._base(s, path)[None, :] - self.entity[objects]
        return -np.sum(diff * diff, axis=1)

    def _score_batch(self, subjects, relations, objects):
        diff = self.entity[subjects] + self.relation[relations] - self.entity[objects]
        return -np.sum(diff * diff, axis=1)

    def _weighted_grad(self, s, path, objects, coefs):
        diff = self._base(s, path)[None, :] - self.entity[objects]
        grad = Gradient()
        total = -2.0 * np.sum(coefs[:, None] * diff, axis=0)
        grad.add_entity(s, total)
        for r in path:
            grad.add_relation(r, total)
        for o, c, d in zip(objects, coefs, diff):
            grad.add_entity(o, 2.0 * c * d)
        return grad


class HolE(Model):
    """``w_r^T (e_s corr e_o)`` with time-domain real parameters.

    Relation paths have no native definition; a path of length >= 2 is
    scored through the isomorphic ComplEx form with ``w' = dft(w) / n`` and
    ``e' = dft(e)``, under which the two models agree on every triple.
    """

    kind = "hole"

    def _score_objects(self, s, path, objects):
        eo = self.entity[objects]
        if len(path) == 1:
            w = self.relation[path[0]]
            fs = np.conj(np.fft.fft(self.entity[s]))
            corr = np.fft.ifft(fs[None, :] * np.fft.fft(eo, axis=1), axis=1).real
            return corr @ w
        u = self._complex_forward(s, path)[-1]
        return np.real(np.conj(np.fft.fft(eo, axis=1)) @ u)

    def _score_batch(self, subjects, relations, objects):
        fs = np.conj(np.fft.fft(self.entity[subjects], axis=1))
        corr = np.fft.ifft(fs * np.fft.fft(self.entity[objects], axis=1), axis=1).real
        return np.sum(corr * self.relation[relations], axis=1)

    def _complex_forward(self, s, path):
        n = self.entity.shape[1]
        us = [np.fft.fft(self.entity[s])]
        for r in path:
            us.append(us[-1] * (np.fft.fft(self.relation[r]) / n))
        return us

    def _weighted_grad(self, s, path, objects, coefs):
        grad = Gradient()
        eo = self.entity[objects]
        es = self.entity[s]
        if len(path) == 1:
            r = path[0]
            w = self.relation[r]
            fs = np.fft.fft(es)
            feo = np.fft.fft(eo, axis=1)
            corr = np.fft.ifft(np.conj(fs)[None, :] * feo, axis=1).real
            grad.add_relation(r, coefs @ corr)
            # d/de_s = w corr e_o ; d/de_o = w conv e_s
            fw = np.fft.fft(w)
            v = coefs @ feo
            grad.add_entity(s, np.fft.ifft(np.conj(fw) * v).real)
            conv = np.fft.ifft(fw * fs).real
            for o, c in zip(objects, coefs):
                grad.add_entity(o, c * conv)
            return grad
        n = es.shape[0]
        us = self._complex_forward(s, path)
        ws = [np.fft.fft(self.relation[r]) / n for r in path]
        v = coefs @ np.conj(np.fft.fft(eo, axis=1))
        for t in range(len(path), 0, -1):
            g = np.conj(us[t - 1] * v)  # packed grad wrt w'
            # pull back through w' = F w / n
            grad.add_relation(path[t - 1], np.fft.fft(np.conj(g)).real / n)
            v = ws[t - 1] * v
        grad.add_entity(s, np.fft.fft(v).real)  # packed grad conj(v), pulled back through F
        # score = Re(sum u conj(F e_o)) = Re(sum conj(u) F e_o)
        gobj = np.fft.fft(np.conj(us[-1])).real
        for o, c in zip(objects, coefs):
            grad.add_entity(o, c * gobj)
        return grad


_CLASSES = {cls.kind: cls for cls in (BlockHolE, RESCAL, DistMult, ComplEx, HolE, TransE)}


def model_class(kind: str) -> type[Model]:
    try:
        return _CLASSES[kind]
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}") from None


def param_shapes(kind: str, dims: dict) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Per-row shapes of the entity and relation tables."""
    model_class(kind)
    if kind == "blockhole":
        b, m = dims.get("b"), dims.get("m")
        if b is None or m is None:
            raise ValueError("blockhole needs dims b and m")
        if int(b) < 1 or int(m) < 1:
            raise ValueError(f"dims must be positive, got b={b} m={m}")
        b, m = int(b), int(m)
        return (b, m), (b, b, m)
    n = dims.get("n")
    if n is None:
        raise ValueError(f"{kind} needs dim n")
    n = int(n)
    if n < 1:
        raise ValueError(f"dims must be positive, got n={n}")
    if kind == "rescal":
        return (n,), (n, n)
    return (n,), (n,)


def normalize_dims(kind: str, dims: dict) -> dict:
    param_shapes(kind, dims)
    if kind == "blockhole":
        return {"b": int(dims["b"]), "m": int(dims["m"])}
    return {"n": int(dims["n"])}


def init_model(
    kind: str,
    num_entities: int,
    num_relations: int,
    dims: dict,
    scale: float = 0.1,
    seed: int = 0,
) -> Model:
    """I.i.d. N(0, scale^2) on every real coordinate, deterministic per seed."""
    if num_entities < 1 or num_relations < 1:
        raise ValueError("need at least one entity and one relation")
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    cls = model_class(kind)
    dims = normalize_dims(kind, dims)
    ent_shape, rel_shape = param_shapes(kind, dims)
    rng = np.random.default_rng(seed)

    def draw(shape):
        x = rng.normal(0.0, 1.0, size=shape) * scale
        if cls.is_complex:
            x = x + 1j * (rng.normal(0.0, 1.0, size=shape) * scale)
        return x

    entity = draw((num_entities,) + ent_shape)
    relation = draw((num_relations,) + rel_shape)
    return cls(entity, relation, dims)


def from_arrays(kind: str, entity: np.ndarray, relation: np.ndarray, dims: dict) -> Model:
    cls = model_class(kind)
    dims = normalize_dims(kind, dims)
    ent_shape, rel_shape = param_shapes(kind, dims)
    dtype = np.complex128 if cls.is_complex else np.float64
    entity = np.asarray(entity, dtype=dtype)
    relation = np.asarray(relation, dtype=dtype)
    if entity.shape[1:] != ent_shape or relation.shape[1:] != rel_shape:
        raise ValueError(
            f"array shapes {entity.shape}, {relation.shape} do not match {kind} dims {dims}"
        )
    return cls(entity, relation, dims)
