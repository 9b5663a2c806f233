//! Sliding-window Viterbi decoding.
//!
//! The decision for step `d` is made once step `d + tb` has been processed,
//! by tracing back `tb` steps from the best state at that point. Remaining
//! decisions at the end of the block trace back from state 0 (flushed
//! streams) or from the best state (truncated streams).

use super::{Termination, Trellis};
use crate::detection::LlrVector;

/// Three times the constraint length of the memory-3 codes used here.
pub const DEFAULT_TRACEBACK: usize = 12;

fn decode_with<F>(
    steps: usize,
    trellis: &Trellis,
    traceback: usize,
    termination: Termination,
    cost: F,
) -> Vec<u8>
where
    F: Fn(usize, u8) -> f64,
{
    let tb = traceback.max(1);
    let states = trellis.num_states();
    let mut metric = vec![f64::INFINITY; states];
    metric[0] = 0.0;
    let mut next = vec![0.0; states];
    // survivor[t * states + s] = predecessor of s at time t+1
    let mut survivor = vec![0u8; steps * states];
    let mut decided = vec![0u8; steps];

    let trace = |survivor: &[u8], mut state: usize, from_time: usize, to_time: usize| -> usize {
        // walk back from `from_time` to `to_time`, returning the state there
        for t in (to_time..from_time).rev() {
            state = survivor[t * states + state] as usize;
        }
        state
    };

    for t in 0..steps {
        for s in 0..states {
            let mut best = f64::INFINITY;
            let mut pred = None;
            for b in trellis.incoming(s) {
                let m = metric[b.from] + cost(t, b.output);
                if pred.is_none() || m < best {
                    best = m;
                    pred = Some(b.from);
                }
            }
            next[s] = best;
            survivor[t * states + s] = pred.expect("two incoming branches") as u8;
        }
        let floor = next.iter().copied().fold(f64::INFINITY, f64::min);
        for (m, n) in metric.iter_mut().zip(&next) {
            *m = n - floor;
        }
        if t >= tb {
            let d = t - tb;
            let at = trace(&survivor, best_state(&metric), t + 1, d + 1);
            decided[d] = (at & 1) as u8;
        }
    }

    if steps > 0 {
        let end_state = match termination {
            Termination::Flush if metric[0].is_finite() => 0,
            _ => best_state(&metric),
        };
        let first_open = steps.saturating_sub(tb);
        let mut state = end_state;
        for t in (first_open..steps).rev() {
            decided[t] = (state & 1) as u8;
            state = survivor[t * states + state] as usize;
        }
    }

    if termination == Termination::Flush {
        decided.truncate(steps.saturating_sub(trellis.memory()));
    }
    decided
}

/// Lowest metric; ties prefer a state entered with input 0, then the lower index.
fn best_state(metric: &[f64]) -> usize {
    (0..metric.len())
        .min_by(|&a, &b| {
            metric[a]
                .total_cmp(&metric[b])
                .then((a & 1).cmp(&(b & 1)))
                .then(a.cmp(&b))
        })
        .expect("non-empty trellis")
}

/// Hard-decision decoding with the Hamming branch metric. `received` holds
/// packed words of `trellis.width()` bits.
pub fn viterbi_hard(
    received: &[u8],
    trellis: &Trellis,
    traceback: usize,
    termination: Termination,
) -> Vec<u8> {
    decode_with(received.len(), trellis, traceback, termination, |t, out| {
        f64::from((received[t] ^ out).count_ones())
    })
}

/// Soft-decision decoding. The branch metric is `sum_i (2 b_i - 1) L_i`,
/// i.e. the negated correlation between the branch bits (as ±1) and the
/// LLRs, which is the Euclidean metric under Gaussian noise up to constants.
pub fn viterbi_soft(
    llrs: &[LlrVector],
    trellis: &Trellis,
    traceback: usize,
    termination: Termination,
) -> Vec<u8> {
    let width = trellis.width();
    decode_with(llrs.len(), trellis, traceback, termination, |t, out| {
        let l = llrs[t].values();
        (0..width)
            .map(|i| {
                let bit = (out >> (width - 1 - i)) & 1;
                if bit == 1 {
                    l[i]
                } else {
                    -l[i]
                }
            })
            .sum()
    })
}
