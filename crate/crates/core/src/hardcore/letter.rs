use std::fmt;

/// Outcome of the swap coin carried by a Dyer–Greenhill addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SwapCoin {
    Swap,
    NoSwap,
}

/// One letter of the hard-core alphabet, delimiter included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HardcoreLetter {
    Remove(usize),
    /// Gibbs addition.
    Add(usize),
    /// Dyer–Greenhill addition; the coin decides whether a blocked addition
    /// with a unique occupied neighbour swaps.
    AddSwap(usize, SwapCoin),
    Sharp,
}

impl HardcoreLetter {
    pub fn vertex(self) -> Option<usize> {
        match self {
            HardcoreLetter::Remove(v) | HardcoreLetter::Add(v) | HardcoreLetter::AddSwap(v, _) => Some(v),
            HardcoreLetter::Sharp => None,
        }
    }
}

impl fmt::Display for HardcoreLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HardcoreLetter::Remove(v) => write!(f, "r{v}"),
            HardcoreLetter::Add(v) => write!(f, "a{v}"),
            HardcoreLetter::AddSwap(v, SwapCoin::Swap) => write!(f, "s{v}"),
            HardcoreLetter::AddSwap(v, SwapCoin::NoSwap) => write!(f, "n{v}"),
            HardcoreLetter::Sharp => f.write_str("#"),
        }
    }
}
