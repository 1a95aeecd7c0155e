"""Small dense networks with manual forward/backward passes.

Two tanh hidden layers by default; the policy head emits logits (softmax
applied downstream), the value head a scalar.  Gradients are computed by
hand so the trainer has no autodiff dependency.
"""
import numpy as np


class MLP:
    """Fully-connected net: input -> tanh hidden layers -> linear output."""

    def __init__(self, dims: list[int], rng: np.random.Generator,
                 out_scale: float = 1.0):
        self.dims = list(dims)
        self.weights = []
        self.biases = []
        for i in range(len(dims) - 1):
            fan_in, fan_out = dims[i], dims[i + 1]
            scale = np.sqrt(2.0 / (fan_in + fan_out))
            if i == len(dims) - 2:
                scale *= out_scale  # small final layer stabilises early PPO
            self.weights.append(rng.standard_normal((fan_in, fan_out)) * scale)
            self.biases.append(np.zeros(fan_out))

    @property
    def params(self) -> list[np.ndarray]:
        return self.weights + self.biases

    def forward(self, x: np.ndarray):
        """Batched forward pass; returns (output, cache for backward)."""
        x = np.atleast_2d(x)
        if x.shape[1] != self.dims[0]:
            raise ValueError(
                f"input dim {x.shape[1]} != expected {self.dims[0]}")
        activations = [x]
        h = x
        n_layers = len(self.weights)
        for i in range(n_layers):
            z = h @ self.weights[i] + self.biases[i]
            h = np.tanh(z) if i < n_layers - 1 else z
            activations.append(h)
        return h, activations

    def backward(self, activations, grad_out: np.ndarray):
        """Gradients of a scalar loss w.r.t. params, given d(loss)/d(output).

        Returns a list aligned with ``params`` (weights then biases).
        """
        n_layers = len(self.weights)
        grad_w = [None] * n_layers
        grad_b = [None] * n_layers
        delta = np.atleast_2d(grad_out)
        for i in range(n_layers - 1, -1, -1):
            h_in = activations[i]
            grad_w[i] = h_in.T @ delta
            grad_b[i] = delta.sum(axis=0)
            if i > 0:
                # propagate through the tanh of the previous layer
                delta = (delta @ self.weights[i].T) * (1.0 - activations[i] ** 2)
        return grad_w + grad_b

    def get_flat(self) -> np.ndarray:
        return np.concatenate([p.ravel() for p in self.params])

    def set_flat(self, flat: np.ndarray) -> None:
        offset = 0
        for p in self.params:
            p[...] = flat[offset:offset + p.size].reshape(p.shape)
            offset += p.size
        if offset != flat.size:
            raise ValueError("flat parameter vector has wrong length")

    def copy_from(self, other: "MLP") -> None:
        for dst, src in zip(self.params, other.params):
            dst[...] = src


class Adam:
    """Adam optimizer over a list of parameter arrays."""

    def __init__(self, params: list[np.ndarray], beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.params = params
        self.beta1, self.beta2, self.eps = beta1, beta2, eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, grads: list[np.ndarray], lr: float) -> None:
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        for p, g, m, v in zip(self.params, grads, self.m, self.v):
            m[...] = b1 * m + (1 - b1) * g
            v[...] = b2 * v + (1 - b2) * g * g
            m_hat = m / (1 - b1 ** self.t)
            v_hat = v / (1 - b2 ** self.t)
            p -= lr * m_hat / (np.sqrt(v_hat) + self.eps)


def log_softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))
