//! The rescue loop: rewire `C` around critical satellites until no move
//! applies.
//!
//! A move takes a `G`-edge `{v, v'}` with `v` in a critical satellite `S`
//! and `v'` outside `S`, neither a 2-anchor nor a responsible 1-anchor.
//! Depending on where `v'` sits, `S` is re-hung on `v'` (op1), `S` is
//! attached to a lone satellite `S'` that then becomes the center (op2), or
//! `S` and `S'` are both cut loose and joined into a new component (op3).
//! Each move keeps the cover weight and lowers `n0 + ncc - 3 nc`.

use std::fmt;

use serde::Serialize;

use crate::components::{analyze, Analysis, Frame, Location, OptCache, Potential};
use crate::cover::SaturationInstance;
use crate::graph::{Edge, EdgeSet, Vertex};
use crate::phase1::HKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MoveKind {
    Op1,
    Op2,
    Op3,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MoveKind::Op1 => "op1",
            MoveKind::Op2 => "op2",
            MoveKind::Op3 => "op3",
        };
        f.write_str(s)
    }
}

/// One rewiring step. `v` lies in the critical satellite `source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RescueMove {
    pub kind: MoveKind,
    pub v: Vertex,
    pub v_prime: Vertex,
    /// `H` component of `S`.
    pub source: usize,
    /// `H` component of `S'` for op2 and op3.
    pub target: Option<usize>,
    /// Cover edges removed.
    pub removed: Vec<Edge>,
}

impl RescueMove {
    pub fn edge(&self) -> Edge {
        Edge::new(self.v, self.v_prime)
    }

    pub fn apply(&self, cover: &EdgeSet) -> EdgeSet {
        let mut c = cover.clone();
        for e in &self.removed {
            assert!(c.remove(e), "rescue edge {e} missing from C");
        }
        assert!(c.insert(self.edge()), "{} already in C", self.edge());
        c
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MoveRecord {
    #[serde(flatten)]
    pub mv: RescueMove,
    pub before: Potential,
    pub after: Potential,
}

impl MoveRecord {
    /// The move left [`Potential::value`] where it was.
    pub fn stalled(&self) -> bool {
        self.after.value() >= self.before.value()
    }
}

impl fmt::Display for MoveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} potential {} -> {}",
            self.mv.kind,
            self.mv.edge(),
            self.before.value(),
            self.after.value()
        )
    }
}

/// State of the loop: the cover, its analysis and the opt cache.
pub struct RescueState<'f, 'g> {
    pub frame: &'f Frame<'g>,
    pub instance: &'f SaturationInstance,
    pub cover: EdgeSet,
    pub analysis: Analysis,
    pub cache: OptCache,
    weight: usize,
}

/// Result of [`run_rescue_loop`].
#[derive(Clone, Debug)]
pub struct RescueOutcome {
    pub cover: EdgeSet,
    pub analysis: Analysis,
    pub moves: Vec<MoveRecord>,
    /// Invariant breaks seen during the loop; empty on a sound run.
    pub audits: Vec<String>,
}

impl<'f, 'g> RescueState<'f, 'g> {
    pub fn new(frame: &'f Frame<'g>, instance: &'f SaturationInstance, cover: EdgeSet) -> Self {
        let mut cache = OptCache::new();
        let analysis = analyze(frame, &cover, &[], &mut cache);
        let weight = instance.weight(&cover);
        RescueState {
            frame,
            instance,
            cover,
            analysis,
            cache,
            weight,
        }
    }

    /// Candidate edges `{v, v'}` in increasing `(v, v')` order, with the
    /// satellite holding `v`.
    fn candidates(&self) -> Vec<(Vertex, Vertex, usize, usize)> {
        let an = &self.analysis;
        let r = an.r_set();
        let mut out = Vec::new();
        for (ci, si) in an.critical_satellites() {
            let h = an.comps[ci].satellites[si].hcomp;
            for &v in &self.frame.hs.comps[h].vertices {
                for &vp in self.frame.g.neighbors(v) {
                    if self.frame.hs.comp_of[vp] == Some(h) || r.contains(&vp) {
                        continue;
                    }
                    if self.cover.contains(&Edge::new(v, vp)) {
                        continue;
                    }
                    out.push((v, vp, ci, si));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The applicable move for a candidate edge, if any, and the analysis
    /// after it when that was needed to decide.
    fn move_for(&mut self, v: Vertex, vp: Vertex, ci: usize, si: usize, hints: &[bool]) -> Option<(RescueMove, Option<Analysis>)> {
        let an = &self.analysis;
        let sat = an.comps[ci].satellites[si];
        let base = RescueMove {
            kind: MoveKind::Op1,
            v,
            v_prime: vp,
            source: sat.hcomp,
            target: None,
            removed: vec![sat.rescue_edge()],
        };
        match an.locate(self.frame, vp) {
            Location::Anchor { j: 0, .. } => Some((base, None)),
            Location::Anchor { j: 1, .. } => {
                let c = base.apply(&self.cover);
                let after = analyze(self.frame, &c, hints, &mut self.cache);
                (after.critical_count() < self.analysis.critical_count()).then_some((base, Some(after)))
            }
            Location::Satellite { comp, index } => {
                let k2 = &an.comps[comp];
                let s2 = k2.satellites[index];
                let lone = k2.satellites.len() == 1 && matches!(k2.center_kind, HKind::Edge | HKind::Star { .. });
                let mv = if lone {
                    RescueMove {
                        kind: MoveKind::Op2,
                        target: Some(s2.hcomp),
                        ..base
                    }
                } else {
                    RescueMove {
                        kind: MoveKind::Op3,
                        target: Some(s2.hcomp),
                        removed: vec![sat.rescue_edge(), s2.rescue_edge()],
                        ..base
                    }
                };
                Some((mv, None))
            }
            _ => None,
        }
    }

    /// First applicable move that lowers [`Potential::value`], with the
    /// analysis after it. An Op2 next to a star center can leave that value
    /// unchanged, so every candidate is tried before settling for the first
    /// applicable one.
    pub fn find_move(&mut self) -> Option<(RescueMove, Option<Analysis>)> {
        let hints = self.analysis.center_hints();
        let now = self.analysis.potential().value();
        let mut fallback = None;
        for (v, vp, ci, si) in self.candidates() {
            let Some((mv, after)) = self.move_for(v, vp, ci, si, &hints) else {
                continue;
            };
            let after = after.unwrap_or_else(|| analyze(self.frame, &mv.apply(&self.cover), &hints, &mut self.cache));
            if after.potential().value() < now {
                return Some((mv, Some(after)));
            }
            fallback.get_or_insert((mv, Some(after)));
        }
        fallback
    }

    /// Applies `mv` and checks weight and potential.
    pub fn apply_move(&mut self, mv: RescueMove, after: Option<Analysis>, audits: &mut Vec<String>) -> MoveRecord {
        let before = self.analysis.potential();
        let hints = self.analysis.center_hints();
        let cover = mv.apply(&self.cover);
        let after = after.unwrap_or_else(|| analyze(self.frame, &cover, &hints, &mut self.cache));
        let weight = self.instance.weight(&cover);
        if weight != self.weight {
            audits.push(format!(
                "{} on {} changed the cover weight from {} to {weight}",
                mv.kind,
                mv.edge(),
                self.weight
            ));
        }
        let degrees = cover.degrees(self.frame.g.n());
        if let Some(v) = (0..degrees.len()).find(|&v| degrees[v] > 2) {
            audits.push(format!("{} on {} leaves degree {} at {v}", mv.kind, mv.edge(), degrees[v]));
        }
        let pot = after.potential();
        if pot.weighted() >= before.weighted() {
            audits.push(format!(
                "{} on {} did not lower the weighted potential ({} -> {})",
                mv.kind,
                mv.edge(),
                before.weighted(),
                pot.weighted()
            ));
        }
        audits.extend(after.audits.iter().cloned());
        self.cover = cover;
        self.analysis = after;
        MoveRecord {
            mv,
            before,
            after: pot,
        }
    }

    /// Edges from a critical satellite to a vertex outside it that is not
    /// in `R`. None should remain when the loop stops.
    pub fn unresolved_edges(&self) -> Vec<Edge> {
        self.candidates()
            .into_iter()
            .map(|(v, vp, _, _)| Edge::new(v, vp))
            .collect()
    }
}

/// Repeats moves until none applies, at most `5 n` times.
pub fn run_rescue_loop(frame: &Frame<'_>, instance: &SaturationInstance, cover: EdgeSet) -> RescueOutcome {
    let mut state = RescueState::new(frame, instance, cover);
    let mut audits = state.analysis.audits.clone();
    let cap = 5 * frame.g.n();
    let mut moves = Vec::new();
    while let Some((mv, after)) = state.find_move() {
        if moves.len() == cap {
            audits.push(format!("rescue loop hit the cap of {cap} moves"));
            break;
        }
        let rec = state.apply_move(mv, after, &mut audits);
        moves.push(rec);
    }
    // Every G-neighbor of a critical satellite outside it lies in R.
    for e in state.unresolved_edges() {
        audits.push(format!("critical satellite edge {e} leads outside R after the loop"));
    }
    audits.sort();
    audits.dedup();
    RescueOutcome {
        cover: state.cover,
        analysis: state.analysis,
        moves,
        audits,
    }
}
