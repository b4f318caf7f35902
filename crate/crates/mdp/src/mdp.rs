use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MdpError {
    #[error("an MDP needs at least one state and one action")]
    Empty,
    #[error("successor table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("successor of ({state}, {action}) is {target}, outside 0..{count}")]
    BadSuccessor { state: usize, action: usize, target: usize, count: usize },
    #[error("grid has no playable cells")]
    EmptyGrid,
    #[error("cell ({0}, {1}) lies outside the grid")]
    OutOfGrid(usize, usize),
    #[error("region `{0}` is defined twice")]
    DuplicateRegion(String),
    #[error("region `{0}` has an empty rectangle")]
    EmptyRegion(String),
    #[error("bad grid config: {0}")]
    Config(String),
    #[error(transparent)]
    Logic(#[from] tlvc_logic::LogicError),
}

/// Finite deterministic MDP: `x' = f(x, a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mdp {
    states: usize,
    actions: usize,
    succ: Vec<usize>,
    coords: Option<Vec<(usize, usize)>>,
}

impl Mdp {
    /// `succ[x * actions + a]` is the successor of `x` under `a`.
    pub fn new(states: usize, actions: usize, succ: Vec<usize>) -> Result<Self, MdpError> {
        if states == 0 || actions == 0 {
            return Err(MdpError::Empty);
        }
        if succ.len() != states * actions {
            return Err(MdpError::TableSize { expected: states * actions, got: succ.len() });
        }
        if let Some(i) = succ.iter().position(|&y| y >= states) {
            return Err(MdpError::BadSuccessor { state: i / actions, action: i % actions, target: succ[i], count: states });
        }
        Ok(Mdp { states, actions, succ, coords: None })
    }

    pub fn with_coords(mut self, coords: Vec<(usize, usize)>) -> Self {
        assert_eq!(coords.len(), self.states);
        self.coords = Some(coords);
        self
    }

    /// Uniformly random successor table.
    pub fn random(states: usize, actions: usize, rng: &mut impl Rng) -> Self {
        let succ = (0..states * actions).map(|_| rng.gen_range(0..states)).collect();
        Mdp::new(states, actions, succ).expect("random table is valid")
    }

    pub fn state_count(&self) -> usize {
        self.states
    }
    pub fn action_count(&self) -> usize {
        self.actions
    }

    #[inline]
    pub fn step(&self, x: usize, a: usize) -> usize {
        self.succ[x * self.actions + a]
    }

    pub fn successors(&self, x: usize) -> &[usize] {
        &self.succ[x * self.actions..(x + 1) * self.actions]
    }

    pub fn coords(&self) -> Option<&[(usize, usize)]> {
        self.coords.as_deref()
    }

    /// For each state, the states that can reach it in one step (deduplicated).
    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pre = vec![Vec::new(); self.states];
        for x in 0..self.states {
            for &y in self.successors(x) {
                if pre[y].last() != Some(&x) {
                    pre[y].push(x);
                }
            }
        }
        pre
    }

    /// `max_a v(f(x, a))` for every `x`.
    pub fn best_successor<T: Copy + PartialOrd>(&self, v: &[T]) -> Vec<T> {
        (0..self.states)
            .map(|x| {
                let s = self.successors(x);
                s[1..].iter().fold(v[s[0]], |m, &y| if v[y] > m { v[y] } else { m })
            })
            .collect()
    }

    /// Lowest-index action maximizing `v(f(x, a))`.
    pub fn argmax_action<T: Copy + PartialOrd>(&self, x: usize, v: &[T]) -> usize {
        let s = self.successors(x);
        let mut best = 0;
        for a in 1..s.len() {
            if v[s[a]] > v[s[best]] {
                best = a;
            }
        }
        best
    }
}
