"""Actor-critic PPO with GAE, a clipped surrogate and linear lr decay.

The actor and critic are two independent tanh MLPs (see nets.py); all
gradients are analytic and checked against finite differences in the
test suite.  Rollouts are time-contiguous across episode boundaries;
GAE handles them with done-masking.
"""
import struct
import csv
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .nets import MLP, Adam, log_softmax
from .seeding import rng_stream

CHECKPOINT_MAGIC = b"LEOSIMCKPT"
CHECKPOINT_VERSION = 1


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""


@dataclass(frozen=True)
class PpoHyperparams:
    n_step: int = 2048
    epochs: int = 10
    minibatch_size: int = 64
    clip_eps: float = 0.2
    discount: float = 0.99
    gae_lambda: float = 0.95
    lr_start: float = 1e-3
    lr_end: float = 5.76e-7
    total_steps: int = 100_000
    value_coef: float = 0.5
    entropy_coef: float = 0.01
    normalize_advantages: bool = True
    hidden: tuple[int, ...] = (64, 64)

    def __post_init__(self):
        if self.n_step < 1 or self.epochs < 1 or self.minibatch_size < 1:
            raise ValueError("n_step, epochs, minibatch_size must be >= 1")
        if not 0 < self.clip_eps < 1:
            raise ValueError("clip_eps must be in (0, 1)")
        if not 0 <= self.discount < 1:
            raise ValueError("discount must be in [0, 1)")
        if not 0 <= self.gae_lambda <= 1:
            raise ValueError("gae_lambda must be in [0, 1]")
        if self.lr_start <= 0 or self.lr_end <= 0:
            raise ValueError("learning rates must be > 0")
        if self.total_steps < 1:
            raise ValueError("total_steps must be >= 1")


def learning_rate(hp: PpoHyperparams, step: int) -> float:
    """Linear decay from lr_start to lr_end over total_steps, exact."""
    frac = min(step, hp.total_steps) / hp.total_steps
    return (1.0 - frac) * hp.lr_start + frac * hp.lr_end


# --- advantage estimation ---------------------------------------------------

def gae_advantages(rewards, values, dones, last_value: float,
                   discount: float, lam: float):
    """GAE advantages and returns via the backward recursion.

    delta_t = r_t + discount * V(s_{t+1}) * (1 - done_t) - V(s_t);
    advantages are the (discount * lam)-weighted tail sums of the deltas,
    truncated at episode boundaries.  Returns (advantages, returns).
    """
    rewards = np.asarray(rewards, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    dones = np.asarray(dones, dtype=np.float64)
    if not rewards.shape == values.shape == dones.shape:
        raise ValueError("rewards/values/dones must have equal shapes")
    adv = kernels.gae_backward(rewards, values, dones, float(last_value),
                               discount, lam)
    return adv, adv + values


# --- losses and analytic gradients -----------------------------------------

def clipped_policy_loss(policy: MLP, states, actions, logp_old, advantages,
                        clip_eps: float):
    """Clipped surrogate (to be maximized) and its parameter gradients.

    Returns (loss, grads, clip_fraction).
    """
    logits, cache = policy.forward(states)
    logp_all = log_softmax(logits)
    if not np.all(np.isfinite(logp_all)):
        raise DivergenceError("non-finite policy logits")
    n = len(actions)
    idx = np.arange(n)
    logp = logp_all[idx, actions]
    ratio = np.exp(logp - logp_old)
    surr1 = ratio * advantages
    surr2 = np.clip(ratio, 1.0 - clip_eps, 1.0 + clip_eps) * advantages
    loss = float(np.minimum(surr1, surr2).mean())
    # gradient flows only through the unclipped branch of the min
    dl_dlogp = np.where(surr1 <= surr2, ratio * advantages, 0.0) / n
    probs = np.exp(logp_all)
    grad_logits = -dl_dlogp[:, None] * probs
    grad_logits[idx, actions] += dl_dlogp
    grads = policy.backward(cache, grad_logits)
    clip_fraction = float(np.mean(np.abs(ratio - 1.0) > clip_eps))
    return loss, grads, clip_fraction


def entropy_bonus(policy: MLP, states):
    """Mean policy entropy and its parameter gradients."""
    logits, cache = policy.forward(states)
    logp_all = log_softmax(logits)
    probs = np.exp(logp_all)
    plogp_sum = (probs * logp_all).sum(axis=1)  # = -H per sample
    entropy = float(-plogp_sum.mean())
    n = states.shape[0] if states.ndim > 1 else 1
    grad_logits = -probs * (logp_all - plogp_sum[:, None]) / n
    grads = policy.backward(cache, grad_logits)
    return entropy, grads


def value_loss(value_net: MLP, states, returns):
    """MSE between value predictions and returns, with gradients."""
    pred, cache = value_net.forward(states)
    pred = pred[:, 0]
    err = pred - returns
    loss = float(np.mean(err * err))
    grad_out = (2.0 * err / err.size)[:, None]
    grads = value_net.backward(cache, grad_out)
    return loss, grads


# --- acting -----------------------------------------------------------------

def act(policy: MLP, state: np.ndarray, mode: str = "sample",
        rng: np.random.Generator | None = None):
    """Pick an action; returns (action, log_prob)."""
    logits, _ = policy.forward(state)
    logp_all = log_softmax(logits)[0]
    if mode == "greedy":
        action = int(np.argmax(logp_all))
    elif mode == "sample":
        if rng is None:
            raise ValueError("sample mode needs an rng")
        cdf = np.cumsum(np.exp(logp_all))
        action = int(np.searchsorted(cdf, rng.random() * cdf[-1]))
        action = min(action, logp_all.size - 1)
    else:
        raise ValueError(f"unknown act mode {mode!r}")
    return action, float(logp_all[action])


# --- training ---------------------------------------------------------------

@dataclass
class TrainResult:
    policy: MLP
    value: MLP
    metrics: list[dict] = field(default_factory=list)


METRICS_FIELDS = ["update", "step", "mean_reward", "policy_loss",
                  "value_loss", "entropy", "clip_fraction", "lr"]


def write_metrics_csv(path, metrics: list[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=METRICS_FIELDS)
        writer.writeheader()
        writer.writerows(metrics)


def train(env_factory, hp: PpoHyperparams, seed: int) -> TrainResult:
    """Run PPO against environments produced by ``env_factory(seed)``.

    Deterministic for a fixed seed.  Metrics carry one row per update:
    recent mean episode reward, losses, entropy, clip fraction and lr.
    """
    env = env_factory(seed)
    obs = env.reset()
    state_dim = obs.size
    n_actions = env.n_actions
    init_rng = rng_stream(seed, "policy-init")
    policy = MLP([state_dim, *hp.hidden, n_actions], init_rng, out_scale=0.01)
    policy_old = MLP([state_dim, *hp.hidden, n_actions], init_rng)
    policy_old.copy_from(policy)
    value_net = MLP([state_dim, *hp.hidden, 1], init_rng)
    opt_policy = Adam(policy.params)
    opt_value = Adam(value_net.params)
    roll_rng = rng_stream(seed, "rollout")

    n_step = hp.n_step
    states = np.empty((n_step, state_dim))
    actions = np.empty(n_step, dtype=np.int64)
    logps = np.empty(n_step)
    rewards = np.empty(n_step)
    values = np.empty(n_step)
    dones = np.empty(n_step)

    metrics: list[dict] = []
    recent_episodes: list[float] = []
    ep_reward = 0.0
    global_step = 0
    update = 0

    while global_step < hp.total_steps:
        window_episodes: list[float] = []
        for t in range(n_step):
            states[t] = obs
            v_pred, _ = value_net.forward(obs)
            values[t] = v_pred[0, 0]
            action, logp = act(policy_old, obs, "sample", roll_rng)
            step = env.step(action)
            actions[t] = action
            logps[t] = logp
            rewards[t] = step.reward
            dones[t] = 1.0 if step.done else 0.0
            ep_reward += step.reward
            if step.done:
                window_episodes.append(ep_reward)
                ep_reward = 0.0
                obs = env.reset()
            else:
                obs = step.state
        v_last, _ = value_net.forward(obs)
        adv, returns = gae_advantages(rewards, values, dones,
                                      float(v_last[0, 0]),
                                      hp.discount, hp.gae_lambda)
        lr = learning_rate(hp, global_step)
        last = {"policy_loss": 0.0, "value_loss": 0.0, "entropy": 0.0,
                "clip_fraction": 0.0}
        for _ in range(hp.epochs):
            perm = roll_rng.permutation(n_step)
            for lo in range(0, n_step, hp.minibatch_size):
                mb = perm[lo:lo + hp.minibatch_size]
                adv_mb = adv[mb]
                if hp.normalize_advantages and mb.size > 1:
                    adv_mb = (adv_mb - adv_mb.mean()) / (adv_mb.std() + 1e-8)
                pl, pgrads, clip_frac = clipped_policy_loss(
                    policy, states[mb], actions[mb], logps[mb], adv_mb,
                    hp.clip_eps)
                ent, egrads = entropy_bonus(policy, states[mb])
                vl, vgrads = value_loss(value_net, states[mb], returns[mb])
                if not (np.isfinite(pl) and np.isfinite(vl)):
                    raise DivergenceError(
                        f"non-finite loss at step {global_step}: "
                        f"policy={pl} value={vl}")
                # ascend surrogate + entropy bonus, descend value loss
                opt_policy.step(
                    [-(g + hp.entropy_coef * e)
                     for g, e in zip(pgrads, egrads)], lr)
                opt_value.step([hp.value_coef * g for g in vgrads], lr)
                last = {"policy_loss": pl, "value_loss": vl, "entropy": ent,
                        "clip_fraction": clip_frac}
        policy_old.copy_from(policy)
        global_step += n_step
        update += 1
        if window_episodes:
            recent_episodes = window_episodes
        mean_reward = (float(np.mean(recent_episodes))
                       if recent_episodes else 0.0)
        metrics.append({"update": update, "step": global_step,
                        "mean_reward": mean_reward, "lr": lr, **last})
    return TrainResult(policy=policy, value=value_net, metrics=metrics)


# --- checkpointing ----------------------------------------------------------
#
# Layout (little-endian):
#   magic "LEOSIMCKPT" | u32 version | per net (policy, then value):
#   u32 n_dims | n_dims * u32 layer dims | parameter arrays in
#   weights-then-biases order, each as raw float64 bytes.

def save_checkpoint(path, policy: MLP, value_net: MLP) -> None:
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<I", CHECKPOINT_VERSION))
        for net in (policy, value_net):
            fh.write(struct.pack("<I", len(net.dims)))
            fh.write(struct.pack(f"<{len(net.dims)}I", *net.dims))
            for p in net.params:
                fh.write(p.astype("<f8").tobytes())


def load_checkpoint(path) -> tuple[MLP, MLP]:
    with open(path, "rb") as fh:
        if fh.read(len(CHECKPOINT_MAGIC)) != CHECKPOINT_MAGIC:
            raise ValueError("not a leosim checkpoint")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {version}")
        nets = []
        rng = np.random.default_rng(0)
        for _ in range(2):
            (n_dims,) = struct.unpack("<I", fh.read(4))
            dims = list(struct.unpack(f"<{n_dims}I", fh.read(4 * n_dims)))
            net = MLP(dims, rng)
            for p in net.params:
                raw = fh.read(8 * p.size)
                p[...] = np.frombuffer(raw, dtype="<f8").reshape(p.shape)
            nets.append(net)
    return nets[0], nets[1]
