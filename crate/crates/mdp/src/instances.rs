//! Small hand-built MDPs used as regression instances.

use tlvc_logic::Registry;

use crate::Mdp;

pub const CANOE_START: usize = 0;

/// Start on the bank: either stay put forever (safe, never across) or
/// paddle across, which must pass a rock before reaching the far shore.
///
/// States: 0 bank, 1 rock, 2 far shore (absorbing). Action 0 stays on the
/// bank, action 1 sets off. Atoms: `r` = across, `q` = not on a rock.
pub fn canoe() -> (Mdp, Registry<f64>) {
    let mdp = Mdp::new(3, 2, vec![0, 1, 2, 2, 2, 2]).expect("static table");
    let reg = Registry::new(3, 1.0)
        .with("r", vec![-1.0, -1.0, 1.0])
        .and_then(|r| r.with("q", vec![1.0, -1.0, 1.0]))
        .expect("static atoms");
    (mdp, reg)
}

/// `n` states on a line; action 0 stays, 1 moves right, 2 moves left.
pub fn line(n: usize) -> Mdp {
    let succ = (0..n).flat_map(|x| [x, (x + 1).min(n - 1), x.saturating_sub(1)]).collect();
    Mdp::new(n, 3, succ).expect("static table")
}

/// Two states that must alternate: `0 -> 1 -> 0`.
pub fn two_cycle() -> Mdp {
    Mdp::new(2, 1, vec![1, 0]).expect("static table")
}
