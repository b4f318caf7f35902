use crate::LogicError;

/// A state sequence: either finite, or `prefix · cycle^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Trace {
    Finite(Vec<usize>),
    Lasso { prefix: Vec<usize>, cycle: Vec<usize> },
}

/// Positions `0..states.len()` with the successor of the last position being
/// `loop_start`. Every trace is evaluated in this form; a finite trace is the
/// lasso whose last state repeats forever, which realises truncated semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout<'a> {
    pub states: std::borrow::Cow<'a, [usize]>,
    pub loop_start: usize,
}

impl Layout<'_> {
    pub fn len(&self) -> usize {
        self.states.len()
    }
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
    #[inline]
    pub fn succ(&self, i: usize) -> usize {
        if i + 1 < self.states.len() {
            i + 1
        } else {
            self.loop_start
        }
    }
}

impl Trace {
    pub fn lasso(prefix: Vec<usize>, cycle: Vec<usize>) -> Result<Self, LogicError> {
        if cycle.is_empty() {
            return Err(LogicError::EmptyCycle);
        }
        Ok(Trace::Lasso { prefix, cycle })
    }

    pub fn finite(states: Vec<usize>) -> Result<Self, LogicError> {
        if states.is_empty() {
            return Err(LogicError::EmptyTrace);
        }
        Ok(Trace::Finite(states))
    }

    pub fn layout(&self) -> Result<Layout<'_>, LogicError> {
        match self {
            Trace::Finite(s) if s.is_empty() => Err(LogicError::EmptyTrace),
            Trace::Finite(s) => Ok(Layout { states: s.as_slice().into(), loop_start: s.len() - 1 }),
            Trace::Lasso { cycle, .. } if cycle.is_empty() => Err(LogicError::EmptyCycle),
            Trace::Lasso { prefix, cycle } if prefix.is_empty() => {
                Ok(Layout { states: cycle.as_slice().into(), loop_start: 0 })
            }
            Trace::Lasso { prefix, cycle } => {
                let mut s = prefix.clone();
                s.extend_from_slice(cycle);
                Ok(Layout { states: s.into(), loop_start: prefix.len() })
            }
        }
    }

    /// Maps a time index to its evaluation position.
    pub fn position(&self, t: usize) -> Result<usize, LogicError> {
        match self {
            Trace::Finite(s) if t >= s.len() => Err(LogicError::TimeOutOfRange { t, len: s.len() }),
            Trace::Finite(_) => Ok(t),
            Trace::Lasso { cycle, .. } if cycle.is_empty() => Err(LogicError::EmptyCycle),
            Trace::Lasso { prefix, cycle } => {
                let p = prefix.len();
                Ok(if t < p + cycle.len() { t } else { p + (t - p) % cycle.len() })
            }
        }
    }

    /// State visited at time `t`.
    pub fn state_at(&self, t: usize) -> Result<usize, LogicError> {
        let pos = self.position(t)?;
        Ok(match self {
            Trace::Finite(s) => s[pos],
            Trace::Lasso { prefix, cycle } => {
                if pos < prefix.len() {
                    prefix[pos]
                } else {
                    cycle[pos - prefix.len()]
                }
            }
        })
    }

    /// The first `n` states of the (infinite) sequence.
    pub fn unroll(&self, n: usize) -> Vec<usize> {
        match self {
            Trace::Finite(s) => s.iter().copied().chain(std::iter::repeat(*s.last().unwrap())).take(n).collect(),
            Trace::Lasso { .. } => (0..n).map(|t| self.state_at(t).unwrap()).collect(),
        }
    }

    pub fn states(&self) -> impl Iterator<Item = usize> + '_ {
        let (a, b): (&[usize], &[usize]) = match self {
            Trace::Finite(s) => (s, &[]),
            Trace::Lasso { prefix, cycle } => (prefix, cycle),
        };
        a.iter().chain(b).copied()
    }
}
