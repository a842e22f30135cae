//! Skipping passive events.
//!
//! A letter is *passive* for a bound when applying it leaves the bound
//! unchanged; the delimiter `♯` is always counted as active. Skipping samplers
//! draw only active letters, from the base distribution conditioned on
//! activity.
//!
//! For CFTP the delimiter splits the generating word into segments. With
//! `D_q` the distribution giving `♯` weight `q` and every other letter
//! `(1 − q) D(a)`:
//!
//! * *contraction* `c^h` deletes the letters that are passive at their
//!   position after history `h`;
//! * *expansion* `e^h_q` re-inserts, before each letter, a geometric number
//!   of passive letters drawn from `D_q` restricted to the passive set;
//! * a *G-word* for `q` is an i.i.d. `D_q` word cut after its first `♯`.
//!
//! Oracle CFTP keeps only contracted words. Round `n` draws a fresh
//! contracted G-word with `q = 2^-n` and prepends it to the previous word,
//! expanding that word against its old history and contracting it against
//! the new one in a single pass ([`double_history`]).

use rand::Rng;

use crate::automaton::{EventWord, ForwardCoupling, MarkovAutomaton, DEFAULT_MAX_STEPS};
use crate::cftp::{CftpSample, CftpStats};
use crate::error::{Error, Result};

/// Passive mass below which a context is treated as having no passive
/// letters at all (guards rejection loops against rounding).
const PASSIVE_MASS_EPSILON: f64 = 1e-12;

/// Bound after a history, together with its active letters.
pub trait HistoryContext<A: MarkovAutomaton + ?Sized>: Clone {
    fn bound(&self) -> &A::Bound;

    /// Base mass `D(Act ∖ {♯})` of the active letters.
    fn active_mass(&self) -> f64;

    fn is_active(&self, letter: A::Letter) -> bool;

    /// Draws from `D_q(· | Act)`.
    fn draw<R: Rng + ?Sized>(&self, automaton: &A, q: f64, rng: &mut R) -> Result<A::Letter>;

    /// Applies `letter` to the bound and refreshes the active set.
    fn advance(&mut self, automaton: &A, letter: A::Letter) -> bool;

    /// `D_q(Act)`.
    fn active_mass_q(&self, q: f64) -> f64 {
        q + (1.0 - q) * self.active_mass()
    }
}

/// An automaton with an efficient active-letter oracle.
pub trait SkippingAutomaton: MarkovAutomaton {
    type Context: HistoryContext<Self>;

    /// Context of the empty history (the bound is `top()`).
    fn context(&self) -> Self::Context;
}

/// `D_q`: the base distribution extended with the delimiter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkipDistribution {
    pub q: f64,
}

impl SkipDistribution {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("q must lie in [0, 1], got {q}")));
        }
        Ok(Self { q })
    }

    /// `q = 2^-m`.
    pub fn halving(m: u32) -> Self {
        Self {
            q: 0.5f64.powi(m as i32),
        }
    }

    pub fn weight<A: MarkovAutomaton + ?Sized>(&self, automaton: &A, letter: A::Letter) -> f64 {
        if letter == automaton.sharp() {
            self.q
        } else {
            (1.0 - self.q) * automaton.base_weight(letter)
        }
    }

    /// Total mass over the extended alphabet; 1 up to rounding.
    pub fn total_mass<A: MarkovAutomaton + ?Sized>(&self, automaton: &A) -> f64 {
        self.q
            + automaton
                .alphabet()
                .into_iter()
                .map(|a| self.weight(automaton, a))
                .sum::<f64>()
    }
}

/// Generic context that recomputes the active set by trying every letter.
/// Quadratic, but independent of any domain-specific oracle.
#[derive(Debug)]
pub struct ScratchContext<A: MarkovAutomaton> {
    bound: A::Bound,
    sharp: A::Letter,
    active: Vec<A::Letter>,
    active_mass: f64,
}

impl<A: MarkovAutomaton> Clone for ScratchContext<A> {
    fn clone(&self) -> Self {
        Self {
            bound: self.bound.clone(),
            sharp: self.sharp,
            active: self.active.clone(),
            active_mass: self.active_mass,
        }
    }
}

impl<A: MarkovAutomaton> ScratchContext<A> {
    pub fn new(automaton: &A, bound: A::Bound) -> Self {
        let mut ctx = Self {
            bound,
            sharp: automaton.sharp(),
            active: Vec::new(),
            active_mass: 0.0,
        };
        ctx.recompute(automaton);
        ctx
    }

    pub fn top(automaton: &A) -> Self {
        Self::new(automaton, automaton.top())
    }

    fn recompute(&mut self, automaton: &A) {
        self.active = automaton
            .alphabet()
            .into_iter()
            .filter(|&a| automaton.is_active(&self.bound, a))
            .collect();
        self.active_mass = self.active.iter().map(|&a| automaton.base_weight(a)).sum();
    }

    /// Active letters of the base alphabet, delimiter excluded.
    pub fn active_letters(&self) -> &[A::Letter] {
        &self.active
    }
}

impl<A: MarkovAutomaton> HistoryContext<A> for ScratchContext<A> {
    fn bound(&self) -> &A::Bound {
        &self.bound
    }

    fn active_mass(&self) -> f64 {
        self.active_mass
    }

    fn is_active(&self, letter: A::Letter) -> bool {
        letter == self.sharp || self.active.contains(&letter)
    }

    fn draw<R: Rng + ?Sized>(&self, automaton: &A, q: f64, rng: &mut R) -> Result<A::Letter> {
        let total = q + (1.0 - q) * self.active_mass;
        if total <= 0.0 {
            return Err(Error::StuckChain);
        }
        let mut u = rng.random::<f64>() * total;
        if u < q {
            return Ok(self.sharp);
        }
        u -= q;
        let mut last = None;
        for &a in &self.active {
            let w = (1.0 - q) * automaton.base_weight(a);
            if w <= 0.0 {
                continue;
            }
            last = Some(a);
            if u < w {
                return Ok(a);
            }
            u -= w;
        }
        // rounding at the top of the range
        last.ok_or(Error::StuckChain)
    }

    fn advance(&mut self, automaton: &A, letter: A::Letter) -> bool {
        let changed = automaton.bound_act(&mut self.bound, letter);
        if changed {
            self.recompute(automaton);
        }
        changed
    }
}

/// `c^h(u)`: keeps the letters of `word` that are active at their position,
/// advancing a copy of `ctx` over the kept letters only.
pub fn contract<A, C>(automaton: &A, ctx: &C, word: &EventWord<A::Letter>) -> EventWord<A::Letter>
where
    A: MarkovAutomaton + ?Sized,
    C: HistoryContext<A>,
{
    let mut ctx = ctx.clone();
    let mut out = EventWord::new();
    for a in word.iter() {
        if ctx.is_active(a) {
            out.push(a);
            ctx.advance(automaton, a);
        }
    }
    out
}

/// Draws a passive letter from `D_q(· | Inact)`. The delimiter is never
/// passive, so this is the base distribution restricted to passive letters.
fn draw_passive<A, C, R>(automaton: &A, ctx: &C, rng: &mut R) -> A::Letter
where
    A: MarkovAutomaton + ?Sized,
    C: HistoryContext<A>,
    R: Rng + ?Sized,
{
    loop {
        let a = automaton.draw(rng);
        if !ctx.is_active(a) {
            return a;
        }
    }
}

/// `e^h_q(u)`: before each letter of the contracted word `word`, inserts a
/// geometric number of passive letters, each drawn from `D_q(· | Inact)` at
/// the current context. The context advances over the original letters.
pub fn expand<A, C, R>(automaton: &A, ctx: &C, q: f64, word: &EventWord<A::Letter>, rng: &mut R) -> EventWord<A::Letter>
where
    A: MarkovAutomaton + ?Sized,
    C: HistoryContext<A>,
    R: Rng + ?Sized,
{
    let mut ctx = ctx.clone();
    let mut out = EventWord::new();
    for a in word.iter() {
        let passive_mass = ((1.0 - q) * (1.0 - ctx.active_mass())).max(0.0);
        if passive_mass > PASSIVE_MASS_EPSILON {
            while rng.random::<f64>() < passive_mass {
                out.push(draw_passive(automaton, &ctx, rng));
            }
        }
        out.push(a);
        ctx.advance(automaton, a);
    }
    out
}

/// Result of [`g_word`]: the final context and the contracted word.
#[derive(Debug, Clone)]
pub struct GWord<C, L> {
    pub context: C,
    pub word: EventWord<L>,
    /// Letters drawn (equal to the word length).
    pub draws: u64,
}

/// Draws a contracted G-word: letters from `D_q(· | Act)` at the running
/// context, stopping after the first `♯`.
pub fn g_word<A, R>(automaton: &A, q: f64, rng: &mut R) -> Result<GWord<A::Context, A::Letter>>
where
    A: SkippingAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParameter(format!("G-word needs 0 < q <= 1, got {q}")));
    }
    let mut ctx = automaton.context();
    let mut word = EventWord::new();
    let sharp = automaton.sharp();
    let mut draws = 0;
    loop {
        let a = ctx.draw(automaton, q, rng)?;
        draws += 1;
        word.push(a);
        ctx.advance(automaton, a);
        if a == sharp {
            return Ok(GWord {
                context: ctx,
                word,
                draws,
            });
        }
    }
}

/// `e_G(v)`: splits `v` into segments ending with `♯` and expands segment
/// `m` (counted from the end) with `q = 2^-m` against the history of the
/// segments before it.
pub fn g_expand<A, R>(automaton: &A, word: &EventWord<A::Letter>, rng: &mut R) -> EventWord<A::Letter>
where
    A: SkippingAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    let sharp = automaton.sharp();
    let mut remaining = word.count(sharp) as u32;
    let mut ctx = automaton.context();
    let mut out = EventWord::new();
    let mut segment = EventWord::new();
    for a in word.iter() {
        segment.push(a);
        if a == sharp {
            let q = SkipDistribution::halving(remaining).q;
            out.extend_from(&expand(automaton, &ctx, q, &segment, rng));
            for b in segment.iter() {
                ctx.advance(automaton, b);
            }
            segment = EventWord::new();
            remaining -= 1;
        }
    }
    out
}

/// Output of one [`double_history`] pass.
#[derive(Debug, Clone)]
pub struct DoubledHistory<C, L> {
    /// Context after the new word (its bound is `𝒮 ∘ w^n`).
    pub context: C,
    /// The contracted word `w^n`.
    pub word: EventWord<L>,
    /// Letters drawn in this pass.
    pub draws: u64,
    /// Bound updates on both chains in this pass.
    pub updates: u64,
}

/// Computes `w^n = c^ε(u^n · e_G(w^{n-1}))` in one pass.
///
/// `word` is `w^{n-1}` (empty when `n = 1`). A fresh contracted G-word with
/// `q = 2^-n` starts the new word. The old word is then replayed against two
/// chains: the old one, started at the top, which tells where the old
/// letters sit, and the new one, which continues after the fresh prefix.
/// Each slot is drawn from `D_{2^-m}` restricted to `Act⁺ ∪ Act⁻`: a draw in
/// `Act⁻` means the slot holds the next old letter, which is popped and
/// replaces the draw; otherwise the draw is a letter the expansion would
/// have inserted. Either way the letter is kept only if active for the new
/// chain. `m` counts the old segments still to come and drops after each
/// old `♯`.
pub fn double_history<A, R>(
    automaton: &A,
    word: EventWord<A::Letter>,
    n: u32,
    rng: &mut R,
) -> Result<DoubledHistory<A::Context, A::Letter>>
where
    A: SkippingAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    if n == 0 {
        return Err(Error::InvalidParameter("round index starts at 1".into()));
    }
    let sharp = automaton.sharp();
    debug_assert_eq!(word.count(sharp), n as usize - 1);

    let fresh = g_word(automaton, SkipDistribution::halving(n).q, rng)?;
    let mut new_ctx = fresh.context;
    let mut new_word = fresh.word;
    let mut draws = fresh.draws;
    let mut updates = fresh.draws;

    let mut old_ctx = automaton.context();
    let mut old = word;
    let mut m = n - 1;
    let mut position = 0;
    while !old.is_empty() {
        debug_assert!(m >= 1, "draw attempted with every old delimiter consumed");
        let q = SkipDistribution::halving(m).q;
        let letter = draw_slot(automaton, &old_ctx, &new_ctx, q, rng)?;
        draws += 1;
        let letter = match letter {
            Slot::Old => {
                let a = old.pop().expect("loop guard");
                if !old_ctx.is_active(a) {
                    return Err(Error::InconsistentWord {
                        letter: format!("{a:?}"),
                        position,
                    });
                }
                position += 1;
                old_ctx.advance(automaton, a);
                updates += 1;
                a
            }
            Slot::Inserted(a) => a,
        };
        if new_ctx.is_active(letter) {
            new_word.push(letter);
            new_ctx.advance(automaton, letter);
            updates += 1;
            if letter == sharp {
                m -= 1;
            }
        }
    }
    debug_assert_eq!(m, 0);
    debug_assert_eq!(new_word.count(sharp), n as usize);
    Ok(DoubledHistory {
        context: new_ctx,
        word: new_word,
        draws,
        updates,
    })
}

enum Slot<L> {
    Old,
    Inserted(L),
}

/// Draws from `D_q` restricted to `Act⁻ ∪ Act⁺` and reports whether the
/// draw lies in `Act⁻` (only membership matters then) or which letter of
/// `Act⁺ ∖ Act⁻` it is. Sampling picks a side in proportion to its mass
/// and rejects `Act⁺` draws that also lie in `Act⁻`, which leaves every
/// letter of the union with probability proportional to its own weight.
fn draw_slot<A, C, R>(automaton: &A, old: &C, new: &C, q: f64, rng: &mut R) -> Result<Slot<A::Letter>>
where
    A: MarkovAutomaton + ?Sized,
    C: HistoryContext<A>,
    R: Rng + ?Sized,
{
    let old_mass = old.active_mass_q(q);
    let new_mass = new.active_mass_q(q);
    loop {
        if rng.random::<f64>() * (old_mass + new_mass) < old_mass {
            return Ok(Slot::Old);
        }
        let a = new.draw(automaton, q, rng)?;
        if !old.is_active(a) {
            return Ok(Slot::Inserted(a));
        }
    }
}

/// Per-round observation passed to [`cftp_oracle_observed`].
#[derive(Debug)]
pub struct OracleRound<'a, B, L> {
    pub round: u32,
    pub bound: &'a B,
    pub word: &'a EventWord<L>,
}

/// CFTP with oracle skipping.
pub fn cftp_oracle<A, R>(automaton: &A, rng: &mut R) -> Result<CftpSample<A::State>>
where
    A: SkippingAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    cftp_oracle_observed(automaton, rng, DEFAULT_MAX_STEPS, |_| {})
}

/// [`cftp_oracle`] with a letter budget and a callback after every round.
///
/// Bounds of successive rounds are nested; debug builds assert it, along
/// with the delimiter count of each word.
pub fn cftp_oracle_observed<A, R, F>(
    automaton: &A,
    rng: &mut R,
    max_letters: u64,
    mut observe: F,
) -> Result<CftpSample<A::State>>
where
    A: SkippingAutomaton + ?Sized,
    R: Rng + ?Sized,
    F: FnMut(OracleRound<'_, A::Bound, A::Letter>),
{
    let mut stats = CftpStats::default();
    let mut word = EventWord::new();
    let mut previous: Option<A::Bound> = None;
    let mut n = 0;
    loop {
        n += 1;
        let doubled = double_history(automaton, word, n, rng)?;
        stats.letters_drawn += doubled.draws;
        stats.bound_updates += doubled.updates;
        stats.doubling_rounds = n as u64;
        word = doubled.word;
        let bound = doubled.context.bound();
        debug_assert_eq!(word.count(automaton.sharp()), n as usize);
        if let Some(prev) = &previous {
            debug_assert!(
                automaton.bound_subset(bound, prev),
                "round {n} bound is not contained in round {} bound",
                n - 1
            );
        }
        observe(OracleRound {
            round: n,
            bound,
            word: &word,
        });
        if let Some(state) = automaton.singleton(bound) {
            stats.backward_time = word.len() as u64;
            return Ok(CftpSample { state, stats });
        }
        if stats.letters_drawn > max_letters {
            return Err(Error::BudgetExhausted(max_letters));
        }
        previous = Some(bound.clone());
    }
}

/// Forward coupling time of the bounding chain when every letter is drawn
/// from the base distribution conditioned on being active.
pub fn forward_oracle_coupling<A, R>(automaton: &A, rng: &mut R, max_steps: u64) -> Result<ForwardCoupling<A::State>>
where
    A: SkippingAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    let mut ctx = automaton.context();
    let mut steps = 0;
    loop {
        if let Some(x) = automaton.singleton(ctx.bound()) {
            return Ok(ForwardCoupling { steps, result: Some(x) });
        }
        if steps >= max_steps {
            return Ok(ForwardCoupling { steps, result: None });
        }
        let a = ctx.draw(automaton, 0.0, rng)?;
        steps += 1;
        ctx.advance(automaton, a);
    }
}

/// Forward coupling time with incremental skipping: letters come from the
/// base distribution minus every passive letter seen since the last active
/// one. Drawing an active letter restores the full distribution.
pub fn forward_incremental_coupling<A, R>(
    automaton: &A,
    rng: &mut R,
    max_steps: u64,
) -> Result<ForwardCoupling<A::State>>
where
    A: SkippingAutomaton + ?Sized,
    R: Rng + ?Sized,
{
    let mut ctx = automaton.context();
    let mut removed = vec![false; automaton.alphabet_len()];
    let mut removed_list: Vec<usize> = Vec::new();
    let mut removed_mass = 0.0;
    let mut steps = 0;
    loop {
        if let Some(x) = automaton.singleton(ctx.bound()) {
            return Ok(ForwardCoupling { steps, result: Some(x) });
        }
        if steps >= max_steps {
            return Ok(ForwardCoupling { steps, result: None });
        }
        if 1.0 - removed_mass <= PASSIVE_MASS_EPSILON {
            return Err(Error::StuckChain);
        }
        let (a, index) = loop {
            let a = automaton.draw(rng);
            let index = automaton.letter_index(a).expect("drawn letters belong to the alphabet");
            if !removed[index] {
                break (a, index);
            }
        };
        steps += 1;
        if ctx.is_active(a) {
            ctx.advance(automaton, a);
            for i in removed_list.drain(..) {
                removed[i] = false;
            }
            removed_mass = 0.0;
        } else {
            removed[index] = true;
            removed_list.push(index);
            removed_mass += automaton.base_weight(a);
        }
    }
}
