//! Small frozen channels used by tests, the acceptance run and the CLI.

use super::channel::FiniteChannel;

fn bit(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Binary, `Y2 = X1` and `Y3 = Y4 = X1 xor X2`. Degraded and semi-deterministic;
/// its region is the triangle with corners `(1, 0)` and `(0, 1)`.
pub fn noiseless_xor() -> FiniteChannel {
    FiniteChannel::degraded_from_factors(
        [2, 2, 2, 2, 2],
        |x1, _, y2| bit(x1, y2),
        |x2, y2, y3| bit(x2 ^ y2, y3),
        |x1, x2, y4| bit(x1 ^ x2, y4),
    )
    .expect("valid channel")
}

/// Every output uniform and independent of the inputs.
pub fn zero_capacity() -> FiniteChannel {
    FiniteChannel::new([2, 2, 2, 2, 2], vec![0.125; 32]).expect("valid channel")
}

/// `Y2 = X1`, `Y3` constant and `Y4 = X2`: receiver 3 hears nothing of `X2`.
pub fn strong_rx1_violation() -> FiniteChannel {
    FiniteChannel::degraded_from_factors(
        [2, 2, 2, 1, 2],
        |x1, _, y2| bit(x1, y2),
        |_, _, _| 1.0,
        |_, x2, y4| bit(x2, y4),
    )
    .expect("valid channel")
}

/// Noisy binary channel, degraded by construction, chosen by randomized search so
/// that both strong-interference inequalities hold on every sampled input.
pub fn degraded_noisy() -> FiniteChannel {
    // Index [x1][x2] or [x2][y2]; probability of output 0.
    const Y2: [[f64; 2]; 2] = [[0.3, 0.48], [0.89, 0.07]];
    const Y3: [[f64; 2]; 2] = [[0.69, 1.0], [0.09, 0.45]];
    const Y4: [[f64; 2]; 2] = [[0.99, 0.63], [0.14, 0.33]];
    let pick = |p0: f64, y: usize| if y == 0 { p0 } else { 1.0 - p0 };
    FiniteChannel::degraded_from_factors(
        [2, 2, 2, 2, 2],
        |x1, x2, y2| pick(Y2[x1][x2], y2),
        |x2, y2, y3| pick(Y3[x2][y2], y3),
        |x1, x2, y4| pick(Y4[x1][x2], y4),
    )
    .expect("valid channel")
}

fn bsc(e: f64, a: usize, b: usize) -> f64 {
    if a == b {
        1.0 - e
    } else {
        e
    }
}

/// `Y2` is `X1` through a BSC(0.1); `Y3 = (X2, Y2 through a BSC(0.2))` and
/// `Y4 = (X2, X1 through a BSC(0.05))`, symbols packed as `2*x2 + bit`.
/// Receiver 3 sees a degraded copy of what receiver 4 sees, so every sum-rate
/// and strong-interference inequality holds for all inputs.
pub fn degraded_cor() -> FiniteChannel {
    FiniteChannel::degraded_from_factors(
        [2, 2, 2, 4, 4],
        |x1, _, y2| bsc(0.1, x1, y2),
        |x2, y2, y3| if y3 / 2 == x2 { bsc(0.2, y2, y3 % 2) } else { 0.0 },
        |x1, x2, y4| if y4 / 2 == x2 { bsc(0.05, x1, y4 % 2) } else { 0.0 },
    )
    .expect("valid channel")
}

/// `Y2 = X1` with noisy `Y3` (from `X2, Y2`) and `Y4`: semi-deterministic and
/// degraded at once, found by randomized search over the strong-interference
/// conditions.
pub fn semidet_noisy() -> FiniteChannel {
    const Y3: [[f64; 2]; 2] = [[0.19, 0.56], [0.68, 0.07]];
    const Y4: [[f64; 2]; 2] = [[0.01, 0.06], [0.44, 0.92]];
    let pick = |p0: f64, y: usize| if y == 0 { p0 } else { 1.0 - p0 };
    FiniteChannel::degraded_from_factors(
        [2, 2, 2, 2, 2],
        |x1, _, y2| bit(x1, y2),
        |x2, y2, y3| pick(Y3[x2][y2], y3),
        |x1, x2, y4| pick(Y4[x1][x2], y4),
    )
    .expect("valid channel")
}
