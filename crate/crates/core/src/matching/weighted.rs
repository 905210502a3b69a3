// Maximum weight matching in general graphs with integer weights.
//
// Primal-dual blossom algorithm in the formulation of Galil (1986), after
// Joris van Rantwijk's reference implementation. Vertex duals are stored
// doubled so every dual stays integral for integer weights.

use super::Matching;
use crate::graph::{Edge, Graph, Vertex};

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightedEdge {
    pub u: Vertex,
    pub v: Vertex,
    pub w: i64,
}

impl WeightedEdge {
    pub fn new(u: Vertex, v: Vertex, w: i64) -> Self {
        WeightedEdge { u, v, w }
    }
}

struct Engine<'a> {
    n: usize,
    edges: &'a [WeightedEdge],
    max_cardinality: bool,
    // endpoint[p] is the vertex at end p of edge p / 2.
    endpoint: Vec<usize>,
    // neighbend[v] lists the remote endpoints of edges incident to v.
    neighbend: Vec<Vec<usize>>,
    // mate[v] is the remote endpoint of v's matched edge.
    mate: Vec<usize>,
    // 0 free, 1 S, 2 T, 5 S-on-scan-path; -1 for released blossoms.
    label: Vec<i8>,
    labelend: Vec<usize>,
    inblossom: Vec<usize>,
    blossomparent: Vec<usize>,
    blossomchilds: Vec<Vec<usize>>,
    blossombase: Vec<usize>,
    blossomendps: Vec<Vec<usize>>,
    bestedge: Vec<usize>,
    blossombestedges: Vec<Option<Vec<usize>>>,
    unused: Vec<usize>,
    dual: Vec<i64>,
    allow: Vec<bool>,
    queue: Vec<usize>,
    scratch_best: Vec<usize>,
}

fn wrap(j: isize, len: usize) -> usize {
    j.rem_euclid(len as isize) as usize
}

impl<'a> Engine<'a> {
    fn new(n: usize, edges: &'a [WeightedEdge], max_cardinality: bool) -> Self {
        let mut endpoint = Vec::with_capacity(2 * edges.len());
        let mut neighbend = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            assert!(e.u != e.v && e.u < n && e.v < n, "bad edge {:?}", e);
            endpoint.push(e.u);
            endpoint.push(e.v);
            neighbend[e.u].push(2 * k + 1);
            neighbend[e.v].push(2 * k);
        }
        let max_w = edges.iter().map(|e| e.w).max().unwrap_or(0).max(0);
        let mut dual = vec![max_w; n];
        dual.extend(std::iter::repeat_n(0, n));
        let mut base: Vec<usize> = (0..n).collect();
        base.extend(std::iter::repeat_n(NONE, n));
        Engine {
            n,
            edges,
            max_cardinality,
            endpoint,
            neighbend,
            mate: vec![NONE; n],
            label: vec![0; 2 * n],
            labelend: vec![NONE; 2 * n],
            inblossom: (0..n).collect(),
            blossomparent: vec![NONE; 2 * n],
            blossomchilds: vec![Vec::new(); 2 * n],
            blossombase: base,
            blossomendps: vec![Vec::new(); 2 * n],
            bestedge: vec![NONE; 2 * n],
            blossombestedges: vec![None; 2 * n],
            unused: (n..2 * n).collect(),
            dual,
            allow: vec![false; edges.len()],
            queue: Vec::new(),
            scratch_best: vec![NONE; 2 * n],
        }
    }

    fn slack(&self, k: usize) -> i64 {
        let e = &self.edges[k];
        self.dual[e.u] + self.dual[e.v] - 2 * e.w
    }

    /// Matches tight edges greedily. With all vertex duals equal this keeps
    /// every invariant of the primal-dual method and saves whole stages.
    fn warm_start(&mut self) {
        let max_w = self.dual.first().copied().unwrap_or(0);
        for k in 0..self.edges.len() {
            let e = self.edges[k];
            if e.w == max_w && self.mate[e.u] == NONE && self.mate[e.v] == NONE {
                self.mate[e.u] = 2 * k + 1;
                self.mate[e.v] = 2 * k;
            }
        }
    }

    fn leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.n {
            out.push(b);
            return;
        }
        let mut stack = vec![b];
        while let Some(x) = stack.pop() {
            for &t in &self.blossomchilds[x] {
                if t < self.n {
                    out.push(t);
                } else {
                    stack.push(t);
                }
            }
        }
    }

    fn leaves_of(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.leaves(b, &mut out);
        out
    }

    fn assign_label(&mut self, w: usize, t: i8, p: usize) {
        let b = self.inblossom[w];
        debug_assert!(self.label[w] == 0 && self.label[b] == 0);
        self.label[w] = t;
        self.label[b] = t;
        self.labelend[w] = p;
        self.labelend[b] = p;
        self.bestedge[w] = NONE;
        self.bestedge[b] = NONE;
        if t == 1 {
            let mut q = std::mem::take(&mut self.queue);
            self.leaves(b, &mut q);
            self.queue = q;
        } else {
            let base = self.blossombase[b];
            let mb = self.mate[base];
            debug_assert!(mb != NONE);
            self.assign_label(self.endpoint[mb], 1, mb ^ 1);
        }
    }

    /// Walks up from `v` and `w` to find a new blossom's base; `NONE` means
    /// an augmenting path was found.
    fn scan_blossom(&mut self, mut v: usize, mut w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        while v != NONE || w != NONE {
            let mut b = self.inblossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossombase[b];
                break;
            }
            debug_assert_eq!(self.label[b], 1);
            path.push(b);
            self.label[b] = 5;
            if self.labelend[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.labelend[b]];
                b = self.inblossom[v];
                debug_assert_eq!(self.label[b], 2);
                v = self.endpoint[self.labelend[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = 1;
        }
        base
    }

    fn add_blossom(&mut self, base: usize, k: usize) {
        let mut v = self.edges[k].u;
        let mut w = self.edges[k].v;
        let bb = self.inblossom[base];
        let mut bv = self.inblossom[v];
        let mut bw = self.inblossom[w];
        let b = self.unused.pop().expect("blossom slot");
        self.blossombase[b] = base;
        self.blossomparent[b] = NONE;
        self.blossomparent[bb] = b;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossomparent[bv] = b;
            path.push(bv);
            endps.push(self.labelend[bv]);
            v = self.endpoint[self.labelend[bv]];
            bv = self.inblossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossomparent[bw] = b;
            path.push(bw);
            endps.push(self.labelend[bw] ^ 1);
            w = self.endpoint[self.labelend[bw]];
            bw = self.inblossom[w];
        }
        debug_assert_eq!(self.label[bb], 1);
        self.label[b] = 1;
        self.labelend[b] = self.labelend[bb];
        self.dual[b] = 0;
        self.blossomchilds[b] = path.clone();
        self.blossomendps[b] = endps;
        for v in self.leaves_of(b) {
            if self.label[self.inblossom[v]] == 2 {
                self.queue.push(v);
            }
            self.inblossom[v] = b;
        }

        let mut touched = Vec::new();
        for &bv in &path {
            let lists: Vec<usize> = match self.blossombestedges[bv].take() {
                Some(list) => list,
                None => self
                    .leaves_of(bv)
                    .into_iter()
                    .flat_map(|v| self.neighbend[v].iter().map(|p| p / 2))
                    .collect(),
            };
            for k in lists {
                let e = self.edges[k];
                let j = if self.inblossom[e.v] == b { e.u } else { e.v };
                let bj = self.inblossom[j];
                if bj != b && self.label[bj] == 1 {
                    let cur = self.scratch_best[bj];
                    if cur == NONE {
                        touched.push(bj);
                        self.scratch_best[bj] = k;
                    } else if self.slack(k) < self.slack(cur) {
                        self.scratch_best[bj] = k;
                    }
                }
            }
            self.bestedge[bv] = NONE;
        }
        touched.sort_unstable();
        let list: Vec<usize> = touched.iter().map(|&bj| self.scratch_best[bj]).collect();
        for bj in touched {
            self.scratch_best[bj] = NONE;
        }
        let mut best = NONE;
        for &k in &list {
            if best == NONE || self.slack(k) < self.slack(best) {
                best = k;
            }
        }
        self.blossombestedges[b] = Some(list);
        self.bestedge[b] = best;
    }

    fn expand_blossom(&mut self, b0: usize, endstage: bool) {
        let mut work = vec![b0];
        while let Some(b) = work.pop() {
            let childs = self.blossomchilds[b].clone();
            for &s in &childs {
                self.blossomparent[s] = NONE;
                if s < self.n {
                    self.inblossom[s] = s;
                } else if endstage && self.dual[s] == 0 {
                    work.push(s);
                } else {
                    for v in self.leaves_of(s) {
                        self.inblossom[v] = s;
                    }
                }
            }
            if !endstage && self.label[b] == 2 {
                self.relabel_expanded(b, &childs);
            }
            self.label[b] = -1;
            self.labelend[b] = NONE;
            self.blossomchilds[b].clear();
            self.blossomendps[b].clear();
            self.blossombase[b] = NONE;
            self.blossombestedges[b] = None;
            self.bestedge[b] = NONE;
            self.unused.push(b);
        }
    }

    /// Relabels the sub-blossoms of an expanded T-blossom along the even
    /// alternating path from its entry child to its base.
    fn relabel_expanded(&mut self, b: usize, childs: &[usize]) {
        let endps = self.blossomendps[b].clone();
        let len = childs.len();
        let entrychild = self.inblossom[self.endpoint[self.labelend[b] ^ 1]];
        let mut j = childs.iter().position(|&c| c == entrychild).expect("entry child") as isize;
        let (jstep, trick): (isize, usize) = if j & 1 == 1 {
            j -= len as isize;
            (1, 0)
        } else {
            (-1, 1)
        };
        let mut p = self.labelend[b];
        while j != 0 {
            self.label[self.endpoint[p ^ 1]] = 0;
            let q = endps[wrap(j - trick as isize, len)];
            self.label[self.endpoint[q ^ trick ^ 1]] = 0;
            self.assign_label(self.endpoint[p ^ 1], 2, p);
            self.allow[q / 2] = true;
            j += jstep;
            p = endps[wrap(j - trick as isize, len)] ^ trick;
            self.allow[p / 2] = true;
            j += jstep;
        }
        let bv = childs[wrap(j, len)];
        let ep = self.endpoint[p ^ 1];
        self.label[ep] = 2;
        self.label[bv] = 2;
        self.labelend[ep] = p;
        self.labelend[bv] = p;
        self.bestedge[bv] = NONE;
        j += jstep;
        while childs[wrap(j, len)] != entrychild {
            let bv = childs[wrap(j, len)];
            if self.label[bv] == 1 {
                j += jstep;
                continue;
            }
            let labelled = self.leaves_of(bv).into_iter().find(|&v| self.label[v] != 0);
            if let Some(v) = labelled {
                debug_assert_eq!(self.label[v], 2);
                self.label[v] = 0;
                let m = self.mate[self.blossombase[bv]];
                self.label[self.endpoint[m]] = 0;
                self.assign_label(v, 2, self.labelend[v]);
            }
            j += jstep;
        }
    }

    /// Swaps matched and unmatched edges inside blossom `b0` so that `v0`
    /// becomes its base.
    fn augment_blossom(&mut self, b0: usize, v0: usize) {
        let mut work = vec![(b0, v0)];
        while let Some((b, v)) = work.pop() {
            let mut t = v;
            while self.blossomparent[t] != b {
                t = self.blossomparent[t];
            }
            if t >= self.n {
                work.push((t, v));
            }
            let childs = self.blossomchilds[b].clone();
            let endps = self.blossomendps[b].clone();
            let len = childs.len();
            let i = childs.iter().position(|&c| c == t).expect("child");
            let mut j = i as isize;
            let (jstep, trick): (isize, usize) = if i & 1 == 1 {
                j -= len as isize;
                (1, 0)
            } else {
                (-1, 1)
            };
            while j != 0 {
                j += jstep;
                let t = childs[wrap(j, len)];
                let p = endps[wrap(j - trick as isize, len)] ^ trick;
                if t >= self.n {
                    work.push((t, self.endpoint[p]));
                }
                j += jstep;
                let t = childs[wrap(j, len)];
                if t >= self.n {
                    work.push((t, self.endpoint[p ^ 1]));
                }
                self.mate[self.endpoint[p]] = p ^ 1;
                self.mate[self.endpoint[p ^ 1]] = p;
            }
            self.blossomchilds[b].rotate_left(i);
            self.blossomendps[b].rotate_left(i);
            self.blossombase[b] = v;
        }
    }

    fn augment_matching(&mut self, k: usize) {
        let e = self.edges[k];
        for (mut s, mut p) in [(e.u, 2 * k + 1), (e.v, 2 * k)] {
            loop {
                let bs = self.inblossom[s];
                debug_assert_eq!(self.label[bs], 1);
                if bs >= self.n {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.labelend[bs] == NONE {
                    break;
                }
                let t = self.endpoint[self.labelend[bs]];
                let bt = self.inblossom[t];
                debug_assert_eq!(self.label[bt], 2);
                s = self.endpoint[self.labelend[bt]];
                let j = self.endpoint[self.labelend[bt] ^ 1];
                debug_assert_eq!(self.blossombase[bt], t);
                if bt >= self.n {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.labelend[bt];
                p = self.labelend[bt] ^ 1;
            }
        }
    }

    /// One stage: grows alternating trees until an augmentation or until
    /// no dual change can help. Returns whether the matching grew.
    fn stage(&mut self) -> bool {
        let n = self.n;
        self.label.fill(0);
        self.bestedge.fill(NONE);
        for b in n..2 * n {
            self.blossombestedges[b] = None;
        }
        self.allow.fill(false);
        self.queue.clear();
        for v in 0..n {
            if self.mate[v] == NONE && self.label[self.inblossom[v]] == 0 {
                self.assign_label(v, 1, NONE);
            }
        }
        loop {
            while let Some(v) = self.queue.pop() {
                debug_assert_eq!(self.label[self.inblossom[v]], 1);
                for idx in 0..self.neighbend[v].len() {
                    let p = self.neighbend[v][idx];
                    let k = p / 2;
                    let w = self.endpoint[p];
                    if self.inblossom[v] == self.inblossom[w] {
                        continue;
                    }
                    let mut kslack = 0;
                    if !self.allow[k] {
                        kslack = self.slack(k);
                        if kslack <= 0 {
                            self.allow[k] = true;
                        }
                    }
                    if self.allow[k] {
                        let lw = self.label[self.inblossom[w]];
                        if lw == 0 {
                            self.assign_label(w, 2, p ^ 1);
                        } else if lw == 1 {
                            let base = self.scan_blossom(v, w);
                            if base != NONE {
                                self.add_blossom(base, k);
                            } else {
                                self.augment_matching(k);
                                return true;
                            }
                        } else if self.label[w] == 0 {
                            self.label[w] = 2;
                            self.labelend[w] = p ^ 1;
                        }
                    } else if self.label[self.inblossom[w]] == 1 {
                        let b = self.inblossom[v];
                        if self.bestedge[b] == NONE || kslack < self.slack(self.bestedge[b]) {
                            self.bestedge[b] = k;
                        }
                    } else if self.label[w] == 0
                        && (self.bestedge[w] == NONE || kslack < self.slack(self.bestedge[w]))
                    {
                        self.bestedge[w] = k;
                    }
                }
            }

            // Dual adjustment.
            let mut deltatype = 0u8;
            let mut delta = 0i64;
            let mut deltaedge = NONE;
            let mut deltablossom = NONE;
            if !self.max_cardinality {
                deltatype = 1;
                delta = *self.dual[..n].iter().min().expect("nonempty");
            }
            for v in 0..n {
                if self.label[self.inblossom[v]] == 0 && self.bestedge[v] != NONE {
                    let d = self.slack(self.bestedge[v]);
                    if deltatype == 0 || d < delta {
                        delta = d;
                        deltatype = 2;
                        deltaedge = self.bestedge[v];
                    }
                }
            }
            for b in 0..2 * n {
                if self.blossomparent[b] == NONE && self.label[b] == 1 && self.bestedge[b] != NONE
                {
                    let s = self.slack(self.bestedge[b]);
                    debug_assert_eq!(s % 2, 0, "odd slack between S-blossoms");
                    let d = s / 2;
                    if deltatype == 0 || d < delta {
                        delta = d;
                        deltatype = 3;
                        deltaedge = self.bestedge[b];
                    }
                }
            }
            for b in n..2 * n {
                if self.blossombase[b] != NONE
                    && self.blossomparent[b] == NONE
                    && self.label[b] == 2
                    && (deltatype == 0 || self.dual[b] < delta)
                {
                    delta = self.dual[b];
                    deltatype = 4;
                    deltablossom = b;
                }
            }
            if deltatype == 0 {
                debug_assert!(self.max_cardinality);
                deltatype = 1;
                delta = self.dual[..n].iter().copied().min().expect("nonempty").max(0);
            }

            for v in 0..n {
                match self.label[self.inblossom[v]] {
                    1 => self.dual[v] -= delta,
                    2 => self.dual[v] += delta,
                    _ => {}
                }
            }
            for b in n..2 * n {
                if self.blossombase[b] != NONE && self.blossomparent[b] == NONE {
                    match self.label[b] {
                        1 => self.dual[b] += delta,
                        2 => self.dual[b] -= delta,
                        _ => {}
                    }
                }
            }

            match deltatype {
                1 => return false,
                2 => {
                    self.allow[deltaedge] = true;
                    let e = self.edges[deltaedge];
                    let i = if self.label[self.inblossom[e.u]] == 0 { e.v } else { e.u };
                    debug_assert_eq!(self.label[self.inblossom[i]], 1);
                    self.queue.push(i);
                }
                3 => {
                    self.allow[deltaedge] = true;
                    let i = self.edges[deltaedge].u;
                    debug_assert_eq!(self.label[self.inblossom[i]], 1);
                    self.queue.push(i);
                }
                _ => self.expand_blossom(deltablossom, false),
            }
        }
    }

    fn run(mut self) -> Vec<Option<Vertex>> {
        let n = self.n;
        if n == 0 || self.edges.is_empty() {
            return vec![None; n];
        }
        self.warm_start();
        for _ in 0..n {
            if !self.stage() {
                break;
            }
            for b in n..2 * n {
                if self.blossomparent[b] == NONE
                    && self.blossombase[b] != NONE
                    && self.label[b] == 1
                    && self.dual[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
        (0..n)
            .map(|v| (self.mate[v] != NONE).then(|| self.endpoint[self.mate[v]]))
            .collect()
    }
}

/// Partner table of a maximum weight matching on vertices `0..n`. With
/// `max_cardinality` the weight is maximized among maximum matchings only.
pub fn max_weight_matching(
    n: usize,
    edges: &[WeightedEdge],
    max_cardinality: bool,
) -> Vec<Option<Vertex>> {
    Engine::new(n, edges, max_cardinality).run()
}

/// Perfect matching of maximum weight, or `None` if `g` has no perfect
/// matching.
pub fn max_weight_perfect_matching(g: &Graph, weight: impl Fn(Edge) -> i64) -> Option<Matching> {
    let edges: Vec<WeightedEdge> = g
        .edges()
        .map(|e| WeightedEdge::new(e.u(), e.v(), weight(e)))
        .collect();
    let m = Matching::from_mates(max_weight_matching(g.n(), &edges, true));
    debug_assert!(m.is_valid_in(g));
    (2 * m.len() == g.n()).then_some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn weight_of(
        edges: &[WeightedEdge],
        mate: &[Option<Vertex>],
    ) -> i64 {
        edges
            .iter()
            .filter(|e| mate[e.u] == Some(e.v))
            .map(|e| e.w)
            .sum()
    }

    // Best (cardinality, weight) pair over all matchings, by recursion on
    // the first unused edge.
    fn brute(n: usize, edges: &[WeightedEdge], maxcard: bool) -> (usize, i64) {
        fn go(i: usize, used: &mut Vec<bool>, edges: &[WeightedEdge], c: usize, w: i64, best: &mut Vec<(usize, i64)>) {
            if i == edges.len() {
                best.push((c, w));
                return;
            }
            go(i + 1, used, edges, c, w, best);
            let e = edges[i];
            if !used[e.u] && !used[e.v] {
                used[e.u] = true;
                used[e.v] = true;
                go(i + 1, used, edges, c + 1, w + e.w, best);
                used[e.u] = false;
                used[e.v] = false;
            }
        }
        let mut all = Vec::new();
        go(0, &mut vec![false; n], edges, 0, 0, &mut all);
        if maxcard {
            *all.iter().max().unwrap()
        } else {
            (0, all.iter().map(|x| x.1).max().unwrap())
        }
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let m = max_weight_perfect_matching(&g, |_| 3).unwrap();
        assert_eq!(m.edges(), vec![Edge::new(0, 1)]);
    }

    #[test]
    fn four_cycle_picks_heavy_pair() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let w = |e: Edge| match e.ends() {
            (0, 1) | (2, 3) => 5,
            _ => 1,
        };
        let m = max_weight_perfect_matching(&g, w).unwrap();
        assert_eq!(m.edges().iter().map(|&e| w(e)).sum::<i64>(), 10);
    }

    #[test]
    fn no_perfect_matching() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(max_weight_perfect_matching(&g, |_| 1).is_none());
    }

    #[test]
    fn prefers_weight_over_cardinality_unless_asked() {
        // Path a-b-c-d with a heavy middle edge.
        let edges = [
            WeightedEdge::new(0, 1, 2),
            WeightedEdge::new(1, 2, 5),
            WeightedEdge::new(2, 3, 2),
        ];
        let mate = max_weight_matching(4, &edges, false);
        assert_eq!(weight_of(&edges, &mate), 5);
        let mate = max_weight_matching(4, &edges, true);
        assert_eq!(weight_of(&edges, &mate), 4);
    }

    #[test]
    fn random_graphs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for round in 0..400 {
            let n = rng.gen_range(2..=9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.45) {
                        edges.push(WeightedEdge::new(u, v, rng.gen_range(0..12)));
                    }
                }
            }
            for maxcard in [false, true] {
                let mate = max_weight_matching(n, &edges, maxcard);
                for (v, &w) in mate.iter().enumerate() {
                    if let Some(w) = w {
                        assert_eq!(mate[w], Some(v));
                    }
                }
                let got_w = weight_of(&edges, &mate);
                let got_c = mate.iter().flatten().count() / 2;
                let (c, w) = brute(n, &edges, maxcard);
                if maxcard {
                    assert_eq!((got_c, got_w), (c, w), "round {round}");
                } else {
                    assert_eq!(got_w, w, "round {round}");
                }
            }
        }
    }
}
