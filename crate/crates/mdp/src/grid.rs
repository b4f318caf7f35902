use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::Deserialize;
use tlvc_logic::Registry;

use crate::{Mdp, MdpError};

pub const ACTION_NAMES: [&str; 5] = ["stay", "up", "down", "left", "right"];
const MOVES: [(isize, isize); 5] = [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)];

/// Inclusive cell rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rect {
    pub r0: usize,
    pub c0: usize,
    pub r1: usize,
    pub c1: usize,
}

impl Rect {
    pub fn cell(r: usize, c: usize) -> Self {
        Rect { r0: r, c0: c, r1: r, c1: c }
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        (self.r0..=self.r1).contains(&r) && (self.c0..=self.c1).contains(&c)
    }

    /// Chebyshev distance in cells; zero inside.
    pub fn linf_distance(&self, r: usize, c: usize) -> usize {
        let gap = |v: usize, lo: usize, hi: usize| lo.saturating_sub(v).max(v.saturating_sub(hi));
        gap(r, self.r0, self.r1).max(gap(c, self.c0, self.c1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub walls: BTreeSet<(usize, usize)>,
    pub regions: Vec<(String, Rect)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridFile {
    rows: usize,
    cols: usize,
    #[serde(default)]
    walls: Vec<[usize; 2]>,
    #[serde(default)]
    region: BTreeMap<String, [usize; 4]>,
}

impl GridSpec {
    pub fn new(rows: usize, cols: usize) -> Self {
        GridSpec { rows, cols, walls: BTreeSet::new(), regions: Vec::new() }
    }

    pub fn wall(mut self, r: usize, c: usize) -> Self {
        self.walls.insert((r, c));
        self
    }

    pub fn region(mut self, name: &str, rect: Rect) -> Self {
        self.regions.push((name.to_string(), rect));
        self
    }

    /// Reads the TOML form:
    ///
    /// ```toml
    /// rows = 4
    /// cols = 4
    /// walls = [[1, 1]]
    /// region.goal = [0, 3, 0, 3]   # r0, c0, r1, c1 (inclusive)
    /// ```
    pub fn from_toml(text: &str) -> Result<Self, MdpError> {
        let f: GridFile = toml::from_str(text).map_err(|e| MdpError::Config(e.to_string()))?;
        let mut spec = GridSpec::new(f.rows, f.cols);
        spec.walls = f.walls.into_iter().map(|[r, c]| (r, c)).collect();
        for (name, [r0, c0, r1, c1]) in f.region {
            spec.regions.push((name, Rect { r0, c0, r1, c1 }));
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        let mut s = format!("rows = {}\ncols = {}\n", self.rows, self.cols);
        let walls: Vec<String> = self.walls.iter().map(|(r, c)| format!("[{r}, {c}]")).collect();
        s.push_str(&format!("walls = [{}]\n", walls.join(", ")));
        for (name, r) in &self.regions {
            s.push_str(&format!("region.{name} = [{}, {}, {}, {}]\n", r.r0, r.c0, r.r1, r.c1));
        }
        s
    }

    pub fn validate(&self) -> Result<(), MdpError> {
        let inside = |r: usize, c: usize| if r < self.rows && c < self.cols { Ok(()) } else { Err(MdpError::OutOfGrid(r, c)) };
        for &(r, c) in &self.walls {
            inside(r, c)?;
        }
        let mut names = BTreeSet::new();
        for (name, rect) in &self.regions {
            if !names.insert(name) {
                return Err(MdpError::DuplicateRegion(name.clone()));
            }
            if rect.r0 > rect.r1 || rect.c0 > rect.c1 {
                return Err(MdpError::EmptyRegion(name.clone()));
            }
            inside(rect.r1, rect.c1)?;
        }
        if self.rows * self.cols == self.walls.len() {
            return Err(MdpError::EmptyGrid);
        }
        Ok(())
    }

    /// Random layout with the given number of single-cell or small regions.
    pub fn random(rows: usize, cols: usize, regions: usize, wall_prob: f64, rng: &mut impl Rng) -> Self {
        let mut spec = GridSpec::new(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if rng.gen_bool(wall_prob) {
                    spec.walls.insert((r, c));
                }
            }
        }
        if spec.walls.len() == rows * cols {
            spec.walls.clear();
        }
        for k in 0..regions {
            let (r0, c0) = (rng.gen_range(0..rows), rng.gen_range(0..cols));
            let r1 = (r0 + rng.gen_range(0..2)).min(rows - 1);
            let c1 = (c0 + rng.gen_range(0..2)).min(cols - 1);
            spec.regions.push((format!("r{k}"), Rect { r0, c0, r1, c1 }));
        }
        spec
    }
}

/// Builds the grid MDP and one signed-distance atom per region.
///
/// States are the non-wall cells in row-major order. Atom values are
/// `clip(0.5 - d, -1, 1)` with `d` the Chebyshev cell distance to the
/// region, so members score 0.5, neighbours -0.5, and nothing sits at 0.
pub fn build_grid(spec: &GridSpec) -> Result<(Mdp, Registry<f64>), MdpError> {
    spec.validate()?;
    let mut index = vec![None; spec.rows * spec.cols];
    let mut coords = Vec::new();
    for r in 0..spec.rows {
        for c in 0..spec.cols {
            if !spec.walls.contains(&(r, c)) {
                index[r * spec.cols + c] = Some(coords.len());
                coords.push((r, c));
            }
        }
    }
    let mut succ = Vec::with_capacity(coords.len() * MOVES.len());
    for (x, &(r, c)) in coords.iter().enumerate() {
        for (dr, dc) in MOVES {
            let (nr, nc) = (r as isize + dr, c as isize + dc);
            let target = if nr < 0 || nc < 0 || nr as usize >= spec.rows || nc as usize >= spec.cols {
                None
            } else {
                index[nr as usize * spec.cols + nc as usize]
            };
            succ.push(target.unwrap_or(x));
        }
    }
    let mdp = Mdp::new(coords.len(), MOVES.len(), succ)?.with_coords(coords.clone());
    let mut reg = Registry::new(coords.len(), 1.0);
    for (name, rect) in &spec.regions {
        let values = coords.iter().map(|&(r, c)| (0.5 - rect.linf_distance(r, c) as f64).clamp(-1.0, 1.0)).collect();
        reg.register(name, values)?;
    }
    Ok((mdp, reg))
}

/// `row,col,value` lines for a per-state table on a grid MDP.
pub fn heatmap_csv(mdp: &Mdp, values: &[f64]) -> String {
    let mut s = String::from("row,col,value\n");
    if let Some(coords) = mdp.coords() {
        for (&(r, c), v) in coords.iter().zip(values) {
            s.push_str(&format!("{r},{c},{v}\n"));
        }
    }
    s
}
