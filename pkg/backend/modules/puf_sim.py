"""
Loop PUF simulation driven by multiply constant-weight control words

A device is an m-by-n array of delay elements. Element (i, j) set to bit b
has delay mu_i(b) + eps_ij(b): mu is the per-row design delay, eps the
device's frozen manufacturing offset. A control word picks one bit per
element, and the measured delay is the sum over all elements plus fresh
measurement noise. Challenges are ordered pairs of codewords and the
response is the sign of the delay difference.

All randomness goes through numpy Generators on the counter-based Philox
bit generator. Sweeps derive one substream per codeword pair from
(seed, pair index), so results do not depend on the thread schedule.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
import json
import logging

import numpy as np
import pandas as pd

from modules.code_core import BinaryCode, MatrixCodeword, bits_of, hamming_distance
from modules.config import settings
from modules.errors import SimulationError

logger = logging.getLogger(__name__)

DISTRIBUTIONS = ('gaussian', 'uniform')
SWEEP_COLUMNS = ['pair_index', 'distance', 'flip_rate']
DEVICE_FORMAT = 'mcwc-puf-device'


def philox(seed, *spawn_key):
    """Generator on Philox seeded by ``seed`` and an optional substream key"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=tuple(spawn_key))))


def _draw(rng, distribution, scale, size):
    # zero mean, standard deviation ``scale``
    if distribution == 'gaussian':
        return rng.normal(0.0, scale, size)
    if distribution == 'uniform':
        half = scale * np.sqrt(3.0)
        return rng.uniform(-half, half, size)
    raise SimulationError(f"unknown distribution {distribution!r}; use one of {', '.join(DISTRIBUTIONS)}")


@dataclass(frozen=True)
class DelayModel:
    """
    One simulated device

    mu has shape (m, 2) with mu[i, b] = mu_i(b); eps has shape (m, n, 2) with
    eps[i, j, b] = eps_ij(b). Both are fixed for the device's lifetime.
    """
    m: int
    n: int
    mu: np.ndarray
    eps: np.ndarray
    s_eps: float
    noise_sigma: float = 0.0
    seed: int = 0
    distribution: str = 'gaussian'

    def __post_init__(self):
        if self.mu.shape != (self.m, 2) or self.eps.shape != (self.m, self.n, 2):
            raise SimulationError(f"mu {self.mu.shape} / eps {self.eps.shape} do not match m={self.m}, n={self.n}")
        self.mu.setflags(write=False)
        self.eps.setflags(write=False)

    def __eq__(self, other):
        if not isinstance(other, DelayModel):
            return NotImplemented
        return ((self.m, self.n, self.s_eps, self.noise_sigma, self.seed, self.distribution) ==
                (other.m, other.n, other.s_eps, other.noise_sigma, other.seed, other.distribution)
                and np.array_equal(self.mu, other.mu) and np.array_equal(self.eps, other.eps))

    __hash__ = None

    def with_noise(self, noise_sigma):
        return DelayModel(self.m, self.n, self.mu.copy(), self.eps.copy(), self.s_eps,
                          noise_sigma, self.seed, self.distribution)


def _mu_table(m, mu_spec):
    """mu_spec: a scalar (mu_i(0) = mu_i(1)), a pair (mu(0), mu(1)) or m pairs"""
    table = np.array(mu_spec, dtype=float)
    if table.ndim == 0:
        table = np.full((m, 2), float(table))
    elif table.shape == (2,):
        table = np.tile(table, (m, 1))
    if table.shape != (m, 2):
        raise SimulationError(f"mu_spec must be a scalar, a pair or {m} pairs, got shape {table.shape}")
    if not np.all(np.isfinite(table)) or np.any(table < 0):
        raise SimulationError("mean delays must be finite and non-negative")
    return table


def device_new(m, n, mu_spec=1.0, s_eps=None, seed=0, noise_sigma=0.0, distribution='gaussian'):
    """
    Draw a device

    Args:
        m, n (int): rows and columns of delay elements
        mu_spec: mean delays, see _mu_table
        s_eps (float): scale of the manufacturing offsets; defaults to
            settings.s_eps_ratio times the mean of mu
        seed (int): device identity
        noise_sigma (float): default measurement noise scale
        distribution (str): 'gaussian' or 'uniform'

    Returns:
        DelayModel
    """
    if m < 1 or n < 1:
        raise SimulationError(f"device needs positive dimensions, got m={m}, n={n}")
    if distribution not in DISTRIBUTIONS:
        raise SimulationError(f"distribution must be one of {DISTRIBUTIONS}, got {distribution!r}")
    mu = _mu_table(m, mu_spec)
    if s_eps is None:
        s_eps = settings.s_eps_ratio * float(mu.mean())
    if s_eps < 0 or noise_sigma < 0:
        raise SimulationError(f"scales must be non-negative, got s_eps={s_eps}, noise={noise_sigma}")
    if s_eps == 0:
        eps = np.zeros((m, n, 2))
    else:
        eps = _draw(philox(seed), distribution, s_eps, (m, n, 2))
    return DelayModel(m, n, mu, eps, float(s_eps), float(noise_sigma), int(seed), distribution)


def _as_bits(dev, u):
    """(m, n) 0/1 array for a MatrixCodeword, packed int or array-like"""
    if isinstance(u, MatrixCodeword):
        bits = np.array([b for row in u.rows for b in row], dtype=np.int64)
    elif isinstance(u, (int, np.integer)):
        if u < 0 or int(u) >> (dev.m * dev.n):
            raise SimulationError(f"word does not fit a {dev.m}x{dev.n} device")
        bits = np.array(bits_of(int(u), dev.m * dev.n), dtype=np.int64)
    else:
        bits = np.asarray(u, dtype=np.int64).ravel()
    if bits.size != dev.m * dev.n or np.any((bits != 0) & (bits != 1)):
        raise SimulationError(f"control word of {bits.size} bits does not match a {dev.m}x{dev.n} device")
    return bits.reshape(dev.m, dev.n)


def _components(dev, batch):
    """mu part and eps part of the delay for a (k, m, n) batch of control words"""
    row_weights = batch.sum(axis=2)
    mu_part = ((dev.n - row_weights) * dev.mu[:, 0] + row_weights * dev.mu[:, 1]).sum(axis=1)
    picked = np.take_along_axis(dev.eps[None, ...], batch[..., None], axis=3)[..., 0]
    eps_part = picked.reshape(len(batch), -1).sum(axis=1)
    return mu_part, eps_part


def delay_components(dev, u):
    """
    The two brackets of the noise-free delay

    Returns:
        tuple: (sum_i (n - w_i) mu_i(0) + w_i mu_i(1), sum_ij eps_ij(u_ij))
    """
    mu_part, eps_part = _components(dev, _as_bits(dev, u)[None, ...])
    return float(mu_part[0]), float(eps_part[0])


def measure_delay(dev, u, noisy=False, rng=None):
    """
    Delay D(u) of the device under control word u

    Args:
        dev (DelayModel): device
        u: MatrixCodeword, packed int or m-by-n 0/1 array
        noisy (bool): add one draw of measurement noise
        rng (np.random.Generator): noise source, required when noisy

    Returns:
        float
    """
    mu_part, eps_part = delay_components(dev, u)
    delay = mu_part + eps_part
    if noisy and dev.noise_sigma > 0:
        if rng is None:
            raise SimulationError("a noisy measurement needs an rng")
        delay += float(_draw(rng, dev.distribution, dev.noise_sigma, None))
    return delay


def deterministic_difference(dev, u, v):
    """mu part of D(u) - D(v); exactly 0 when u and v share their row weights"""
    mu_parts, _ = _components(dev, np.stack([_as_bits(dev, u), _as_bits(dev, v)]))
    return float(mu_parts[0] - mu_parts[1])


@dataclass(frozen=True)
class ChallengeResponse:
    """Ordered challenge (u, v) by code index, its noise-free delay difference and sign"""
    u_index: int
    v_index: int
    u: int
    v: int
    difference: float
    response: int

    @property
    def usable(self):
        return self.response != 0


def _code_batch(dev, code):
    if not isinstance(code, BinaryCode):
        raise SimulationError("PUF control words must come from a binary code")
    if code.length != dev.m * dev.n:
        raise SimulationError(f"code length {code.length} does not match a {dev.m}x{dev.n} device")
    return code.as_array().astype(np.int64).reshape(len(code), dev.m, dev.n)


def reference_differences(dev, code):
    """|C|-by-|C| matrix of noise-free D(u_a) - D(u_b), split as mu part + eps part"""
    mu_part, eps_part = _components(dev, _code_batch(dev, code))
    return (mu_part[:, None] - mu_part[None, :]) + (eps_part[:, None] - eps_part[None, :])


def generate_crps(dev, code):
    """
    All |C|(|C| - 1) ordered challenge-response pairs

    Response is +1 when D(u) > D(v), -1 when D(u) < D(v). An exact tie gets
    response 0 and is reported unusable.
    """
    differences = reference_differences(dev, code)
    crps = []
    for a, u in enumerate(code.words):
        for b, v in enumerate(code.words):
            if a == b:
                continue
            diff = float(differences[a, b])
            crps.append(ChallengeResponse(a, b, u, v, diff, int(np.sign(diff))))
    ties = sum(1 for c in crps if not c.usable)
    if ties:
        logger.debug(f"{ties} of {len(crps)} challenges tied, marked unusable")
    return crps


def _pair_flip_rate(reference, sigma, distribution, trials, seed, pair_index):
    rng = philox(seed, pair_index)
    noise = _draw(rng, distribution, sigma, (trials, 2))
    noisy = reference + noise[:, 0] - noise[:, 1]
    return float(np.mean(np.sign(noisy) != np.sign(reference)))


def reliability_sweep(dev, code, noise_sigma=None, trials=1000, seed=0, threads=None):
    """
    Flip rate of every unordered codeword pair under noisy re-measurement

    Each trial measures both words once with independent noise and compares
    the sign of the difference with the noise-free reference.

    Args:
        dev (DelayModel): device
        code (BinaryCode): control words
        noise_sigma (float): measurement noise scale (device default if None)
        trials (int): re-measurements per pair
        seed (int): sweep seed; pair p uses substream (seed, p)
        threads (int): worker threads (settings.threads if None)

    Returns:
        pd.DataFrame: pair_index, u_index, v_index, distance, flip_rate, usable
    """
    if trials < 1:
        raise SimulationError(f"trials must be >= 1, got {trials}")
    sigma = dev.noise_sigma if noise_sigma is None else float(noise_sigma)
    if sigma < 0:
        raise SimulationError(f"noise scale must be non-negative, got {sigma}")
    threads = threads or settings.threads
    differences = reference_differences(dev, code)
    pairs = list(combinations(range(len(code)), 2))

    def flip_rate(index):
        a, b = pairs[index]
        reference = float(differences[a, b])
        if reference == 0:
            return np.nan
        if sigma == 0:
            return 0.0
        return _pair_flip_rate(reference, sigma, dev.distribution, trials, seed, index)

    if threads > 1 and len(pairs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rates = list(pool.map(flip_rate, range(len(pairs))))
    else:
        rates = [flip_rate(i) for i in range(len(pairs))]

    frame = pd.DataFrame({
        'pair_index': np.arange(len(pairs), dtype=np.int64),
        'u_index': [a for a, _ in pairs],
        'v_index': [b for _, b in pairs],
        'distance': [hamming_distance(code.words[a], code.words[b]) for a, b in pairs],
        'flip_rate': rates,
    })
    frame['usable'] = frame['flip_rate'].notna()
    logger.debug(f"sweep over {len(pairs)} pairs x {trials} trials at noise {sigma}")
    return frame


def distance_summary(frame):
    """Mean flip rate and pair count per distance bucket (usable pairs only)"""
    usable = frame[frame['usable']]
    summary = usable.groupby('distance')['flip_rate'].agg(['mean', 'count']).reset_index()
    return summary.rename(columns={'mean': 'mean_flip_rate', 'count': 'pairs'})


def population_sweep(devices, code, noise_sigma, trials, seed=0, threads=None):
    """reliability_sweep over several devices; device k sweeps with seed (seed, k)"""
    frames = []
    for k, dev in enumerate(devices):
        sweep_seed = int(np.random.SeedSequence(int(seed), spawn_key=(k,)).generate_state(1)[0])
        frame = reliability_sweep(dev, code, noise_sigma, trials, sweep_seed, threads)
        frame.insert(0, 'device', k)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


def is_non_increasing(summary, tolerance=0.0):
    rates = summary.sort_values('distance')['mean_flip_rate'].to_numpy()
    return bool(np.all(np.diff(rates) <= tolerance))


def ensemble_difference_variance(m, n, u, v, s_eps, devices=10000, seed=0, distribution='gaussian'):
    """
    Spread of the noise-free D(u) - D(v) across freshly drawn devices

    Returns:
        tuple: (sample variance, closed form 2 s_eps^2 d(u, v))
    """
    template = device_new(m, n, 1.0, 0.0)
    bu, bv = _as_bits(template, u), _as_bits(template, v)
    eps = _draw(philox(seed), distribution, s_eps, (devices, m, n, 2))
    picked_u = np.take_along_axis(eps, np.broadcast_to(bu[None, ..., None], (devices, m, n, 1)), axis=3)
    picked_v = np.take_along_axis(eps, np.broadcast_to(bv[None, ..., None], (devices, m, n, 1)), axis=3)
    samples = (picked_u - picked_v).reshape(devices, -1).sum(axis=1)
    distance = int(np.sum(bu != bv))
    return float(np.var(samples, ddof=1)), 2.0 * s_eps ** 2 * distance


def sweep_write(frame, path, manifest=None):
    """CSV ``pair_index,distance,flip_rate`` preceded by a commented per-distance summary"""
    summary = distance_summary(frame)
    with open(path, 'w') as fh:
        if manifest is not None:
            fh.write(manifest.comment_block())
        for row in summary.itertuples(index=False):
            fh.write(f"# summary: distance={row.distance} mean_flip_rate={row.mean_flip_rate:.6g} pairs={row.pairs}\n")
        frame[SWEEP_COLUMNS].to_csv(fh, index=False, float_format='%.6g', na_rep='nan')
    return path


def device_to_dict(dev):
    return {
        'format': DEVICE_FORMAT,
        'm': dev.m,
        'n': dev.n,
        'mu': dev.mu.tolist(),
        'eps': dev.eps.tolist(),
        's_eps': dev.s_eps,
        'noise_sigma': dev.noise_sigma,
        'seed': dev.seed,
        'distribution': dev.distribution,
    }


def device_from_dict(data):
    if data.get('format') != DEVICE_FORMAT:
        raise SimulationError(f"not a device file (format={data.get('format')!r})")
    try:
        return DelayModel(int(data['m']), int(data['n']),
                          np.array(data['mu'], dtype=float), np.array(data['eps'], dtype=float),
                          float(data['s_eps']), float(data.get('noise_sigma', 0.0)),
                          int(data.get('seed', 0)), data.get('distribution', 'gaussian'))
    except (KeyError, TypeError, ValueError) as e:
        raise SimulationError(f"malformed device file: {e}") from e


def device_save(dev, path):
    with open(path, 'w') as fh:
        json.dump(device_to_dict(dev), fh)
    logger.info(f"💾 Device {dev.m}x{dev.n} (seed {dev.seed}) saved to {path}")
    return path


def device_load(path):
    with open(path, 'r') as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise SimulationError(f"{path}: {e}") from e
    return device_from_dict(data)
