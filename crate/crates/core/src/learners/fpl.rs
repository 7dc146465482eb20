use crate::oracle::perturbed_argmin;
use crate::rng::{RandomStreams, StreamName};

/// `argmin_i { ĉ^i_{<t} - q^i/η }`, lowest index on ties.
pub fn fpl_choose(cumulative: &[f64], q: &[f64], eta: f64) -> usize {
    debug_assert_eq!(cumulative.len(), q.len());
    perturbed_argmin(cumulative, eta, q)
}

/// Infeasible leader: the same argmin but over `ĉ_{1:t}` (this round's
/// estimate included) and a perturbation held fixed across rounds.
/// Only meaningful as a virtual learner in verification.
pub fn ifpl_choose(cumulative_through_t: &[f64], q_star: &[f64], eta: f64) -> usize {
    perturbed_argmin(cumulative_through_t, eta, q_star)
}

/// Fills `q` with fresh exponentials from the perturbation stream.
pub fn draw_perturbations(streams: &mut RandomStreams, q: &mut [f64]) {
    let s = streams.get(StreamName::Perturbation);
    q.iter_mut().for_each(|x| *x = s.exponential());
}
