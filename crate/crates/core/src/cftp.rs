//! Coupling from the past without skipping.
//!
//! [`cftp_naive`] composes the maps of every state explicitly and only works
//! on enumerable state spaces; it mainly serves as a reference.
//! [`cftp_bounded`] runs the bounding chain over a generating word that grows
//! backwards in time, doubling the block of fresh letters each round.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::automaton::{MarkovAutomaton, DEFAULT_MAX_STEPS};
use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Work counters of one CFTP run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CftpStats {
    /// Random letters drawn.
    pub letters_drawn: u64,
    /// Applications of the action or of the bounding operator, counting
    /// replays of old letters.
    pub bound_updates: u64,
    /// Rounds of backward extension.
    pub doubling_rounds: u64,
    /// Length of the generating word when the run stopped.
    pub backward_time: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CftpSample<S> {
    pub state: S,
    pub stats: CftpStats,
}

/// CFTP over the explicit state space: keeps `S(s)`, the image of state `s`
/// under the letters drawn so far, and prepends each new letter `a` through
/// `S(s) ← S(s · a)` until all images agree.
pub fn cftp_naive<A, R>(automaton: &A, rng: &mut R) -> Result<CftpSample<A::State>>
where
    A: MarkovAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    cftp_naive_with_budget(automaton, rng, DEFAULT_MAX_STEPS)
}

pub fn cftp_naive_with_budget<A, R>(automaton: &A, rng: &mut R, max_letters: u64) -> Result<CftpSample<A::State>>
where
    A: MarkovAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    let states = automaton.states()?;
    if states.is_empty() {
        return Err(Error::UnsupportedDomain);
    }
    let index: HashMap<&A::State, usize> = states.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut image: Vec<usize> = (0..states.len()).collect();
    let mut next = vec![0; states.len()];
    // successor[s] for the letter being prepended
    let mut successor = vec![0; states.len()];
    let mut stats = CftpStats::default();

    while !all_equal(&image) {
        if stats.letters_drawn >= max_letters {
            return Err(Error::BudgetExhausted(max_letters));
        }
        let a = automaton.draw(rng);
        stats.letters_drawn += 1;
        for (s, state) in states.iter().enumerate() {
            let moved = automaton.act(state, a);
            successor[s] = index[&moved];
        }
        stats.bound_updates += states.len() as u64;
        for s in 0..states.len() {
            next[s] = image[successor[s]];
        }
        std::mem::swap(&mut image, &mut next);
    }
    stats.backward_time = stats.letters_drawn;
    Ok(CftpSample {
        state: states[image[0]].clone(),
        stats,
    })
}

fn all_equal(values: &[usize]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

/// CFTP with bounding chains and period doubling.
pub fn cftp_bounded<A, R>(automaton: &A, rng: &mut R) -> Result<CftpSample<A::State>>
where
    A: MarkovAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    cftp_bounded_with_budget(automaton, rng, DEFAULT_MAX_STEPS)
}

/// [`cftp_bounded`] with a letter budget.
///
/// Round `r` draws `2^(r-1)` fresh letters and places them *before* the
/// existing word, so after round `r` the word has `2^r − 1` letters and its
/// suffix is the previous round's word. Each round recomputes the bound
/// from `top()` across the whole word. Blocks are kept as generator seeds
/// and replayed, so memory does not grow with the word.
pub fn cftp_bounded_with_budget<A, R>(automaton: &A, rng: &mut R, max_letters: u64) -> Result<CftpSample<A::State>>
where
    A: MarkovAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    run_bounded(automaton, rng, max_letters, None::<fn(&[A::Letter])>)
}

/// [`cftp_bounded_with_budget`] with a callback receiving the full
/// generating word (earliest letter first) at every round. The word is
/// materialized for the callback, so this is meant for diagnostics.
pub fn cftp_bounded_observed<A, R, F>(
    automaton: &A,
    rng: &mut R,
    max_letters: u64,
    observe: F,
) -> Result<CftpSample<A::State>>
where
    A: MarkovAutomaton + ?Sized,
    R: Rng + ?Sized,
    F: FnMut(&[A::Letter]),
{
    run_bounded(automaton, rng, max_letters, Some(observe))
}

struct Block {
    seed: u64,
    len: u64,
}

impl Block {
    fn letters<'a, A: MarkovAutomaton + ?Sized>(&self, automaton: &'a A) -> impl Iterator<Item = A::Letter> + 'a {
        let mut rng = SimRng::seed_from_u64(self.seed);
        (0..self.len).map(move |_| automaton.draw(&mut rng))
    }
}

fn run_bounded<A, R, F>(
    automaton: &A,
    rng: &mut R,
    max_letters: u64,
    mut observe: Option<F>,
) -> Result<CftpSample<A::State>>
where
    A: MarkovAutomaton + ?Sized,
    R: Rng + ?Sized,
    F: FnMut(&[A::Letter]),
{
    // Blocks in generation order; the generating word reads them newest
    // block first.
    let mut blocks: Vec<Block> = Vec::new();
    let mut stats = CftpStats::default();
    let mut block_len: u64 = 1;
    loop {
        if stats.letters_drawn + block_len > max_letters {
            return Err(Error::BudgetExhausted(max_letters));
        }
        blocks.push(Block {
            seed: rng.random(),
            len: block_len,
        });
        stats.letters_drawn += block_len;
        stats.doubling_rounds += 1;
        block_len *= 2;

        let mut bound = automaton.top();
        for block in blocks.iter().rev() {
            for a in block.letters(automaton) {
                automaton.bound_act(&mut bound, a);
            }
        }
        stats.bound_updates += stats.letters_drawn;

        if let Some(observe) = observe.as_mut() {
            let word: Vec<A::Letter> = blocks.iter().rev().flat_map(|b| b.letters(automaton)).collect();
            observe(&word);
        }

        if let Some(state) = automaton.singleton(&bound) {
            stats.backward_time = stats.letters_drawn;
            return Ok(CftpSample { state, stats });
        }
    }
}
