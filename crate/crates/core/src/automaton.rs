//! Markov automata, bounding chains and forward coupling.
//!
//! A Markov automaton is a finite state space driven by i.i.d. letters: each
//! letter acts deterministically on states, so one letter sequence moves
//! every state at once (the grand coupling). A bounding chain tracks a
//! representable superset of the set of states reachable under that
//! coupling. The alphabet is extended with a delimiter letter, `sharp`,
//! which moves nothing but is always counted as active.

use std::collections::VecDeque;
use std::fmt::Debug;
use std::hash::Hash;

use rand::Rng;

use crate::error::{Error, Result};

/// Letters drawn before a coupling attempt gives up.
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000_000;

pub trait MarkovAutomaton {
    type State: Clone + Eq + Hash + Debug;
    type Letter: Copy + Eq + Hash + Debug;
    type Bound: Clone + Eq + Debug;

    /// The delimiter letter.
    fn sharp(&self) -> Self::Letter;

    /// Every letter of the base alphabet, delimiter excluded.
    fn alphabet(&self) -> Vec<Self::Letter>;

    fn alphabet_len(&self) -> usize;

    /// Position of `letter` in `alphabet()`; `None` for the delimiter and for
    /// letters that do not belong to this automaton.
    fn letter_index(&self, letter: Self::Letter) -> Option<usize>;

    fn contains_letter(&self, letter: Self::Letter) -> bool {
        letter == self.sharp() || self.letter_index(letter).is_some()
    }

    /// Probability of `letter` under the base distribution; zero for the
    /// delimiter.
    fn base_weight(&self, letter: Self::Letter) -> f64;

    /// Draws one letter from the base distribution.
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Letter;

    fn act(&self, state: &Self::State, letter: Self::Letter) -> Self::State;

    /// Bound representing the whole state space.
    fn top(&self) -> Self::Bound;

    /// Applies `letter` to `bound` in place; returns whether the bound changed.
    fn bound_act(&self, bound: &mut Self::Bound, letter: Self::Letter) -> bool;

    fn singleton(&self, bound: &Self::Bound) -> Option<Self::State>;

    fn bound_contains(&self, bound: &Self::Bound, state: &Self::State) -> bool;

    /// Inclusion of the state sets represented by two bounds.
    fn bound_subset(&self, inner: &Self::Bound, outer: &Self::Bound) -> bool;

    fn is_active(&self, bound: &Self::Bound, letter: Self::Letter) -> bool {
        if letter == self.sharp() {
            return true;
        }
        let mut next = bound.clone();
        self.bound_act(&mut next, letter)
    }

    /// Explicit enumeration of the state space, for small domains.
    fn states(&self) -> Result<Vec<Self::State>> {
        Err(Error::UnsupportedDomain)
    }
}

/// FIFO word over the extended alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EventWord<L> {
    letters: VecDeque<L>,
}

impl<L: Copy + Eq> EventWord<L> {
    pub fn new() -> Self {
        Self {
            letters: VecDeque::new(),
        }
    }

    pub fn push(&mut self, letter: L) {
        self.letters.push_back(letter);
    }

    pub fn pop(&mut self) -> Option<L> {
        self.letters.pop_front()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = L> + '_ {
        self.letters.iter().copied()
    }

    pub fn count(&self, letter: L) -> usize {
        self.letters.iter().filter(|&&a| a == letter).count()
    }

    pub fn to_vec(&self) -> Vec<L> {
        self.iter().collect()
    }

    /// Appends all of `other` after this word.
    pub fn extend_from(&mut self, other: &EventWord<L>) {
        self.letters.extend(other.letters.iter().copied());
    }
}

impl<L> From<Vec<L>> for EventWord<L> {
    fn from(letters: Vec<L>) -> Self {
        Self {
            letters: letters.into(),
        }
    }
}

impl<L> FromIterator<L> for EventWord<L> {
    fn from_iter<I: IntoIterator<Item = L>>(iter: I) -> Self {
        Self {
            letters: iter.into_iter().collect(),
        }
    }
}

fn check_letter<A: MarkovAutomaton + ?Sized>(automaton: &A, letter: A::Letter) -> Result<()> {
    if automaton.contains_letter(letter) {
        Ok(())
    } else {
        Err(Error::UnknownLetter(format!("{letter:?}")))
    }
}

/// `state · w₁ · … · wₙ`.
pub fn apply_word<A: MarkovAutomaton + ?Sized>(
    automaton: &A,
    state: &A::State,
    word: &EventWord<A::Letter>,
) -> Result<A::State> {
    let mut x = state.clone();
    for letter in word.iter() {
        check_letter(automaton, letter)?;
        x = automaton.act(&x, letter);
    }
    Ok(x)
}

/// `bound ∘ w₁ ∘ … ∘ wₙ`.
pub fn bound_word<A: MarkovAutomaton + ?Sized>(
    automaton: &A,
    bound: &A::Bound,
    word: &EventWord<A::Letter>,
) -> Result<A::Bound> {
    let mut b = bound.clone();
    for letter in word.iter() {
        check_letter(automaton, letter)?;
        automaton.bound_act(&mut b, letter);
    }
    Ok(b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardCoupling<S> {
    /// Letters drawn until the bound became a singleton (or the budget ran out).
    pub steps: u64,
    /// The coupled state; `None` when `max_steps` was reached first.
    pub result: Option<S>,
}

/// Runs the bounding chain forward from `top()` with i.i.d. base letters
/// until it collapses to a single state. Coupling is checked after every
/// letter.
pub fn forward_coupling<A, R>(automaton: &A, rng: &mut R, max_steps: u64) -> ForwardCoupling<A::State>
where
    A: MarkovAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    let mut bound = automaton.top();
    if let Some(x) = automaton.singleton(&bound) {
        return ForwardCoupling {
            steps: 0,
            result: Some(x),
        };
    }
    let mut steps = 0;
    while steps < max_steps {
        let letter = automaton.draw(rng);
        steps += 1;
        if automaton.bound_act(&mut bound, letter) {
            if let Some(x) = automaton.singleton(&bound) {
                return ForwardCoupling { steps, result: Some(x) };
            }
        }
    }
    ForwardCoupling { steps, result: None }
}
