//! Propagation over partial tiling complements.
//!
//! A [`PartialCover`] fixes some elements inside a hypothetical complement `T'`
//! of `T` and some outside it. Every group element must be covered exactly once
//! by `T' + T`, which drives unique-candidate propagation and, failing that,
//! branching on the most constrained point. Closed proof trees are written as
//! JSON and can be re-checked by [`replay_tree`], which shares no code with the
//! engine.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicInteger;
use crate::error::{Error, Result};
use crate::group::{Group, PointSet};

/// Default branching depth.
pub const DEFAULT_DEPTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialCover {
    tile: PointSet,
    inside: PointSet,
    outside: PointSet,
}

impl PartialCover {
    pub fn new(tile: &PointSet, inside: &PointSet, outside: &PointSet) -> Result<Self> {
        tile.group().ensure_same(inside.group())?;
        tile.group().ensure_same(outside.group())?;
        if tile.is_empty() {
            return Err(Error::EmptySet);
        }
        if let Some(p) = inside.iter().find(|&p| outside.contains(p)) {
            return Err(Error::Precondition(format!(
                "{} is asserted both in and out",
                inside.fmt_point(p)
            )));
        }
        Ok(PartialCover { tile: tile.clone(), inside: inside.clone(), outside: outside.clone() })
    }

    pub fn tile(&self) -> &PointSet {
        &self.tile
    }

    pub fn inside(&self) -> &PointSet {
        &self.inside
    }

    pub fn outside(&self) -> &PointSet {
        &self.outside
    }

    pub fn group(&self) -> &Group {
        self.tile.group()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeductionKind {
    ForcedIn,
    ForcedOut,
    Contradiction,
}

/// `ForcedIn`: `subject` is the only way to cover `reason`.
/// `ForcedOut`: `subject + T` would cover `reason` a second time.
/// `Contradiction`: `reason` is uncovered with no candidates, or covered twice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Deduction {
    pub kind: DeductionKind,
    pub subject: usize,
    pub reason: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Candidates {
    Covered,
    Options(Vec<usize>),
}

struct Engine<'a> {
    group: &'a Group,
    tile_len: usize,
    /// `plus[i * n + c] = c + t_i`, `minus[i * n + g] = g - t_i`
    plus: Vec<usize>,
    minus: Vec<usize>,
}

#[derive(Clone)]
struct State {
    inside: Vec<bool>,
    outside: Vec<bool>,
    cover: Vec<u8>,
}

impl<'a> Engine<'a> {
    fn new(tile: &'a PointSet) -> Self {
        let group = tile.group();
        let n = group.order();
        let mut plus = Vec::with_capacity(n * tile.len());
        let mut minus = Vec::with_capacity(n * tile.len());
        for t in tile.iter() {
            plus.extend((0..n).map(|x| group.add(x, t)));
            minus.extend((0..n).map(|x| group.sub(x, t)));
        }
        Engine { group, tile_len: tile.len(), plus, minus }
    }

    fn n(&self) -> usize {
        self.group.order()
    }

    fn shifted(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n();
        (0..self.tile_len).map(move |i| self.plus[i * n + c])
    }

    fn state(&self, pc: &PartialCover) -> State {
        let n = self.n();
        let mut s = State { inside: vec![false; n], outside: vec![false; n], cover: vec![0; n] };
        for c in pc.inside.iter() {
            self.place(&mut s, c);
        }
        for c in pc.outside.iter() {
            s.outside[c] = true;
        }
        s
    }

    fn place(&self, s: &mut State, c: usize) {
        s.inside[c] = true;
        for p in self.shifted(c).collect::<Vec<_>>() {
            s.cover[p] = s.cover[p].saturating_add(1);
        }
    }

    /// First point of `c + T` already covered, if any.
    fn clash(&self, s: &State, c: usize) -> Option<usize> {
        let mut hit: Option<usize> = None;
        for p in self.shifted(c) {
            if s.cover[p] > 0 {
                hit = Some(hit.map_or(p, |h| h.min(p)));
            }
        }
        hit
    }

    /// Raw covers of `g` that are not asserted out, ascending.
    fn raw(&self, s: &State, g: usize) -> Vec<usize> {
        let n = self.n();
        let mut c: Vec<usize> =
            (0..self.tile_len).map(|i| self.minus[i * n + g]).filter(|&c| !s.outside[c]).collect();
        c.sort_unstable();
        c.dedup();
        c
    }

    fn candidates(&self, s: &State, g: usize) -> Candidates {
        if s.cover[g] > 0 {
            return Candidates::Covered;
        }
        Candidates::Options(self.raw(s, g).into_iter().filter(|&c| self.clash(s, c).is_none()).collect())
    }

    /// Runs to a fixpoint; returns the contradiction point if one is reached.
    fn propagate(&self, s: &mut State, log: &mut Vec<Deduction>) -> Option<usize> {
        if let Some(p) = (0..self.n()).find(|&p| s.cover[p] > 1) {
            log.push(Deduction { kind: DeductionKind::Contradiction, subject: p, reason: p });
            return Some(p);
        }
        loop {
            let mut changed = false;
            for g in 0..self.n() {
                if s.cover[g] > 0 {
                    continue;
                }
                let mut options = Vec::new();
                for c in self.raw(s, g) {
                    match self.clash(s, c) {
                        Some(p) => {
                            s.outside[c] = true;
                            log.push(Deduction { kind: DeductionKind::ForcedOut, subject: c, reason: p });
                        }
                        None => options.push(c),
                    }
                }
                match options.as_slice() {
                    [] => {
                        log.push(Deduction { kind: DeductionKind::Contradiction, subject: g, reason: g });
                        return Some(g);
                    }
                    [c] => {
                        self.place(s, *c);
                        log.push(Deduction { kind: DeductionKind::ForcedIn, subject: *c, reason: g });
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return None;
            }
        }
    }

    fn to_cover(&self, tile: &PointSet, s: &State) -> PartialCover {
        let ins = (0..self.n()).filter(|&i| s.inside[i]);
        let outs = (0..self.n()).filter(|&i| s.outside[i]);
        PartialCover {
            tile: tile.clone(),
            inside: PointSet::new(self.group, ins),
            outside: PointSet::new(self.group, outs),
        }
    }
}

pub fn cover_candidates(state: &PartialCover, g: usize) -> Candidates {
    let engine = Engine::new(&state.tile);
    let s = engine.state(state);
    engine.candidates(&s, g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Propagation {
    Fixpoint { state: PartialCover, deductions: Vec<Deduction> },
    Contradiction { point: usize, deductions: Vec<Deduction> },
}

pub fn propagate(state: &PartialCover) -> Propagation {
    let engine = Engine::new(&state.tile);
    let mut s = engine.state(state);
    let mut log = Vec::new();
    match engine.propagate(&mut s, &mut log) {
        Some(point) => Propagation::Contradiction { point, deductions: log },
        None => Propagation::Fixpoint { state: engine.to_cover(&state.tile, &s), deductions: log },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeOutcome {
    Contradiction,
    Branch { point: usize, children: Vec<ProofNode> },
    /// Depth limit reached, or every point covered (a genuine complement).
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    /// Element added to `in` on entering this node; `None` at the root.
    pub assumption: Option<usize>,
    pub deductions: Vec<Deduction>,
    pub outcome: NodeOutcome,
}

impl ProofNode {
    pub fn size(&self) -> usize {
        1 + match &self.outcome {
            NodeOutcome::Branch { children, .. } => children.iter().map(ProofNode::size).sum(),
            _ => 0,
        }
    }

    pub fn depth(&self) -> usize {
        match &self.outcome {
            NodeOutcome::Branch { children, .. } => 1 + children.iter().map(ProofNode::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn is_closed(&self) -> bool {
        match &self.outcome {
            NodeOutcome::Contradiction => true,
            NodeOutcome::Branch { children, .. } => children.iter().all(ProofNode::is_closed),
            NodeOutcome::Open => false,
        }
    }

    /// Root-to-leaf paths as sequences of forced-in subjects and assumptions.
    pub fn paths(&self) -> Vec<Vec<Deduction>> {
        let mut own: Vec<Deduction> = Vec::new();
        if let Some(a) = self.assumption {
            own.push(Deduction { kind: DeductionKind::ForcedIn, subject: a, reason: a });
        }
        own.extend(self.deductions.iter().copied());
        match &self.outcome {
            NodeOutcome::Branch { children, .. } => children
                .iter()
                .flat_map(|c| c.paths())
                .map(|tail| own.iter().copied().chain(tail).collect())
                .collect(),
            _ => vec![own],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub start: PartialCover,
    pub root: ProofNode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    Closed(ProofTree),
    /// Not refuted: the depth limit was hit or a complete complement exists.
    Inconclusive { tree: ProofTree, complement: Option<PointSet> },
}

impl Refutation {
    pub fn tree(&self) -> &ProofTree {
        match self {
            Refutation::Closed(t) => t,
            Refutation::Inconclusive { tree, .. } => tree,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Refutation::Closed(_))
    }
}

struct Brancher<'a> {
    engine: Engine<'a>,
    depth_limit: usize,
    complement: Option<PointSet>,
}

impl Brancher<'_> {
    fn explore(&mut self, s: &mut State, assumption: Option<usize>, depth: usize) -> ProofNode {
        let mut deductions = Vec::new();
        if let Some(a) = assumption {
            self.engine.place(s, a);
        }
        if self.engine.propagate(s, &mut deductions).is_some() {
            return ProofNode { assumption, deductions, outcome: NodeOutcome::Contradiction };
        }
        // most constrained uncovered point; ties go to the smallest index
        let mut best: Option<(usize, Vec<usize>)> = None;
        for g in 0..self.engine.n() {
            if let Candidates::Options(opts) = self.engine.candidates(s, g) {
                if best.as_ref().map_or(true, |(_, b)| opts.len() < b.len()) {
                    best = Some((g, opts));
                }
            }
        }
        let Some((point, options)) = best else {
            if self.complement.is_none() {
                let pts = (0..self.engine.n()).filter(|&i| s.inside[i]);
                self.complement = Some(PointSet::new(self.engine.group, pts));
            }
            return ProofNode { assumption, deductions, outcome: NodeOutcome::Open };
        };
        if depth >= self.depth_limit {
            return ProofNode { assumption, deductions, outcome: NodeOutcome::Open };
        }
        let mut children = Vec::with_capacity(options.len());
        for c in options {
            let mut child = s.clone();
            children.push(self.explore(&mut child, Some(c), depth + 1));
        }
        ProofNode { assumption, deductions, outcome: NodeOutcome::Branch { point, children } }
    }
}

/// Depth-first refutation: propagate, then branch on the uncovered point with
/// the fewest candidates, each candidate in ascending order.
pub fn refute_by_branching(state: &PartialCover, depth: usize) -> Refutation {
    let engine = Engine::new(&state.tile);
    let mut s = engine.state(state);
    let mut b = Brancher { engine, depth_limit: depth, complement: None };
    let root = b.explore(&mut s, None, 0);
    let tree = ProofTree { start: state.clone(), root };
    if tree.root.is_closed() {
        Refutation::Closed(tree)
    } else {
        Refutation::Inconclusive { tree, complement: b.complement }
    }
}

// ---------------------------------------------------------------------------
// Transcript form and the independent replayer.

pub const TREE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeductionRecord {
    pub kind: DeductionKind,
    pub subject: Vec<u32>,
    pub reason: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub assume: Option<Vec<u32>>,
    pub deductions: Vec<DeductionRecord>,
    /// "contradiction", "branch" or "open".
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub branch_point: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub children: Vec<NodeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeFile {
    pub schema_version: u32,
    pub moduli: Vec<u32>,
    pub tile: Vec<Vec<u32>>,
    #[serde(rename = "in")]
    pub inside: Vec<Vec<u32>>,
    #[serde(rename = "out")]
    pub outside: Vec<Vec<u32>>,
    pub closed: bool,
    pub nodes: usize,
    pub root: NodeRecord,
}

impl ProofTree {
    pub fn to_file(&self) -> TreeFile {
        let g = self.start.group();
        let rec = |d: &Deduction| DeductionRecord {
            kind: d.kind,
            subject: g.coords(d.subject),
            reason: g.coords(d.reason),
        };
        fn node(g: &Group, n: &ProofNode, rec: &dyn Fn(&Deduction) -> DeductionRecord) -> NodeRecord {
            let (outcome, branch_point, children) = match &n.outcome {
                NodeOutcome::Contradiction => ("contradiction", None, Vec::new()),
                NodeOutcome::Open => ("open", None, Vec::new()),
                NodeOutcome::Branch { point, children } => (
                    "branch",
                    Some(g.coords(*point)),
                    children.iter().map(|c| node(g, c, rec)).collect(),
                ),
            };
            NodeRecord {
                assume: n.assumption.map(|a| g.coords(a)),
                deductions: n.deductions.iter().map(rec).collect(),
                outcome: outcome.to_string(),
                branch_point,
                children,
            }
        }
        TreeFile {
            schema_version: TREE_SCHEMA_VERSION,
            moduli: g.moduli().to_vec(),
            tile: self.start.tile.coords_rows(),
            inside: self.start.inside.coords_rows(),
            outside: self.start.outside.coords_rows(),
            closed: self.root.is_closed(),
            nodes: self.root.size(),
            root: node(g, &self.root, &rec),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayReport {
    pub closed: bool,
    pub nodes: usize,
}

/// Re-checks a proof tree from its transcript using plain coordinate arithmetic.
/// Every forced-in must be the unique candidate of its reason point, every
/// forced-out must double-cover its reason, every contradiction must hold, and
/// every branch must list exactly the candidates of its point.
pub fn replay_tree(file: &TreeFile) -> Result<ReplayReport> {
    type P = Vec<u32>;
    let m = &file.moduli;
    let add = |a: &P, b: &P| -> P { a.iter().zip(b).zip(m).map(|((x, y), n)| (x + y) % n).collect() };
    let sub = |a: &P, b: &P| -> P { a.iter().zip(b).zip(m).map(|((x, y), n)| (x + n - y) % n).collect() };
    let bad = |msg: String| Error::Verification(format!("tree replay: {msg}"));
    let valid = |p: &P| p.len() == m.len() && p.iter().zip(m).all(|(x, n)| x < n);
    if file.schema_version != TREE_SCHEMA_VERSION {
        return Err(bad(format!("unknown schema version {}", file.schema_version)));
    }
    let all_points = file.tile.iter().chain(&file.inside).chain(&file.outside);
    if file.tile.is_empty() || !all_points.clone().all(valid) {
        return Err(bad("malformed point".into()));
    }

    #[derive(Clone)]
    struct St {
        ins: BTreeSet<Vec<u32>>,
        outs: BTreeSet<Vec<u32>>,
    }
    let tile = &file.tile;
    let covers = |st: &St, p: &P| st.ins.iter().filter(|c| tile.iter().any(|t| &add(c, t) == p)).count();
    let clashes = |st: &St, c: &P| tile.iter().any(|t| covers(st, &add(c, t)) > 0);
    let candidates = |st: &St, g: &P| -> BTreeSet<P> {
        tile.iter().map(|t| sub(g, t)).filter(|c| !st.outs.contains(c) && !clashes(st, c)).collect()
    };

    fn walk(
        n: &NodeRecord,
        mut st: St,
        ctx: &dyn Fn(&NodeRecord, &mut St) -> Result<Option<BTreeSet<Vec<u32>>>>,
        count: &mut usize,
    ) -> Result<bool> {
        *count += 1;
        match ctx(n, &mut st)? {
            None => Ok(n.outcome == "contradiction"),
            Some(expected) => {
                let got: BTreeSet<Vec<u32>> = n.children.iter().filter_map(|c| c.assume.clone()).collect();
                if got != expected || got.len() != n.children.len() {
                    return Err(Error::Verification("tree replay: branch children differ from candidates".into()));
                }
                let mut closed = true;
                for c in &n.children {
                    closed &= walk(c, st.clone(), ctx, count)?;
                }
                Ok(closed)
            }
        }
    }

    let step = |n: &NodeRecord, st: &mut St| -> Result<Option<BTreeSet<P>>> {
        if let Some(a) = &n.assume {
            st.ins.insert(a.clone());
        }
        for d in &n.deductions {
            let ok = match d.kind {
                DeductionKind::ForcedIn => {
                    let ok = covers(st, &d.reason) == 0
                        && candidates(st, &d.reason) == BTreeSet::from([d.subject.clone()]);
                    st.ins.insert(d.subject.clone());
                    ok
                }
                DeductionKind::ForcedOut => {
                    let ok = tile.iter().any(|t| add(&d.subject, t) == d.reason) && covers(st, &d.reason) > 0;
                    st.outs.insert(d.subject.clone());
                    ok
                }
                DeductionKind::Contradiction => {
                    covers(st, &d.reason) > 1 || (covers(st, &d.reason) == 0 && candidates(st, &d.reason).is_empty())
                }
            };
            if !ok {
                return Err(bad(format!("{:?} on {:?} does not follow", d.kind, d.subject)));
            }
        }
        match n.outcome.as_str() {
            "contradiction" => match n.deductions.last() {
                Some(d) if d.kind == DeductionKind::Contradiction => Ok(None),
                _ => Err(bad("contradiction node without a contradiction".into())),
            },
            "branch" => {
                let p = n.branch_point.as_ref().ok_or_else(|| bad("branch without point".into()))?;
                if covers(st, p) != 0 {
                    return Err(bad("branch point already covered".into()));
                }
                Ok(Some(candidates(st, p)))
            }
            "open" => Ok(None),
            other => Err(bad(format!("unknown outcome {other}"))),
        }
    };

    let start = St { ins: file.inside.iter().cloned().collect(), outs: file.outside.iter().cloned().collect() };
    let mut count = 0;
    let closed = walk(&file.root, start, &step, &mut count)?;
    Ok(ReplayReport { closed, nodes: count })
}

// ---------------------------------------------------------------------------
// Facts 1-3 and the six-cycle conclusion.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactsReport {
    /// The point whose candidate set under `in = {0}` equals `P`.
    pub fact1_point: Option<usize>,
    pub fact1_holds: bool,
    /// Per `x ∈ P`: the refutation of `in = {0, x}, out = {2x}`.
    pub fact2: Vec<(usize, Refutation)>,
    /// Per unordered pair `x != y` in `P`: whether `in = {0, x, y}` contradicts
    /// during propagation (no branching).
    pub fact3: Vec<(usize, usize, bool)>,
}

impl FactsReport {
    pub fn all_hold(&self) -> bool {
        self.fact1_holds
            && self.fact2.iter().all(|(_, r)| r.is_closed())
            && self.fact3.iter().all(|&(_, _, c)| c)
    }
}

/// Checks the three facts behind the cycle decomposition of every complement:
/// each `t ∈ T'` has a successor `t + x` with `x ∈ P` (Fact 1), `t, t + x ∈ T'`
/// forces `t + 2x ∈ T'` (Fact 2), and the successor is unique (Fact 3).
/// All four choices of `x` are checked; no symmetry reduction is used.
pub fn verify_facts(tile: &PointSet, p_set: &PointSet, depth: usize, fact1_point: Option<usize>) -> Result<FactsReport> {
    let g = tile.group();
    g.ensure_same(p_set.group())?;
    let zero = PointSet::singleton(g, 0);
    let empty = PointSet::empty(g);
    let base = PartialCover::new(tile, &zero, &empty)?;
    let engine = Engine::new(tile);
    let s = engine.state(&base);
    let matches = |q: usize| engine.candidates(&s, q) == Candidates::Options(p_set.indices().to_vec());
    let point = match fact1_point {
        Some(q) => matches(q).then_some(q),
        None => (0..g.order()).find(|&q| matches(q)),
    };
    let fact2 = crate::par::map(p_set.indices(), |&x| {
        let inside = PointSet::new(g, [0, x]);
        let outside = PointSet::singleton(g, g.add(x, x));
        let pc = PartialCover::new(tile, &inside, &outside).expect("disjoint in/out");
        (x, refute_by_branching(&pc, depth))
    });
    let mut fact3 = Vec::new();
    for (i, &x) in p_set.indices().iter().enumerate() {
        for &y in &p_set.indices()[i + 1..] {
            let pc = PartialCover::new(tile, &PointSet::new(g, [0, x, y]), &empty)?;
            fact3.push((x, y, matches!(propagate(&pc), Propagation::Contradiction { .. })));
        }
    }
    Ok(FactsReport { fact1_point: point, fact1_holds: point.is_some(), fact2, fact3 })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerSum {
    pub v: usize,
    pub x: usize,
    pub exponent: u64,
    pub cycle_length: u64,
    pub vanishes: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SixCycleReport {
    pub sums: Vec<InnerSum>,
    pub all_vanish: bool,
    /// `|T'| = |G|/|T|` split into cycles of the common length, if uniform.
    pub cycles_per_complement: Option<usize>,
}

/// For a complement that splits into cycles `{t, t+x, ..., t+(m-1)x}` with
/// `x ∈ P`, `chi_{T'}(v)` is a sum of `zeta^{<v,t>} * sum_k zeta^{k<v,x>}`. The
/// inner sums are checked to vanish exactly for every `v ∈ V`, `x ∈ P`.
pub fn six_cycle_conclusion(tile: &PointSet, p_set: &PointSet, v_set: &PointSet) -> Result<SixCycleReport> {
    let g = tile.group();
    g.ensure_same(p_set.group())?;
    g.ensure_same(v_set.group())?;
    let n = g.exponent();
    let mut sums = Vec::new();
    let mut lengths = BTreeSet::new();
    for v in v_set.iter() {
        for x in p_set.iter() {
            let m = g.element_order(x);
            lengths.insert(m);
            let e = g.pairing_exponent(v, x);
            let inner = CyclotomicInteger::sum_of_roots(n, (0..m).map(|k| (k * e % n) as i64));
            sums.push(InnerSum { v, x, exponent: e, cycle_length: m, vanishes: inner.is_zero() });
        }
    }
    let complement_size = g.order() / tile.len();
    let cycles_per_complement = match (lengths.len(), lengths.iter().next()) {
        (1, Some(&m)) if complement_size % m as usize == 0 => Some(complement_size / m as usize),
        _ => None,
    };
    let all_vanish = !sums.is_empty() && sums.iter().all(|s| s.vanishes);
    Ok(SixCycleReport { sums, all_vanish, cycles_per_complement })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6(pts: &[usize]) -> PointSet {
        PointSet::new(&Group::cyclic(6).unwrap(), pts.iter().copied())
    }

    #[test]
    fn two_candidates_no_forcing() {
        let pc = PartialCover::new(&z6(&[0, 3]), &z6(&[0]), &z6(&[])).unwrap();
        assert_eq!(cover_candidates(&pc, 1), Candidates::Options(vec![1, 4]));
        assert_eq!(cover_candidates(&pc, 0), Candidates::Covered);
        match propagate(&pc) {
            Propagation::Fixpoint { state, deductions } => {
                assert_eq!(state.inside(), pc.inside());
                assert!(deductions.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn double_cover_is_immediate_contradiction() {
        let pc = PartialCover::new(&z6(&[0, 3]), &z6(&[0, 3]), &z6(&[])).unwrap();
        assert!(matches!(propagate(&pc), Propagation::Contradiction { point: 0, .. }));
    }

    #[test]
    fn in_and_out_must_be_disjoint() {
        assert!(PartialCover::new(&z6(&[0, 3]), &z6(&[0]), &z6(&[0])).is_err());
    }

    #[test]
    fn genuine_complement_is_not_refuted() {
        let pc = PartialCover::new(&z6(&[0, 3]), &z6(&[0, 1, 2]), &z6(&[])).unwrap();
        for depth in [0, 1, 5, 64] {
            let r = refute_by_branching(&pc, depth);
            assert!(!r.is_closed());
            if let Refutation::Inconclusive { complement, .. } = r {
                assert_eq!(complement, Some(z6(&[0, 1, 2])));
            }
        }
    }

    #[test]
    fn forced_chain_and_replay() {
        // T = {0,1} in Z_6, in = {0}, out = {2}: point 2 forces 1? no, 1 overlaps;
        // candidates of 2 are {1, 2} minus out -> {1}, but 1 + T = {1,2} clashes at 1.
        let t = z6(&[0, 1]);
        let pc = PartialCover::new(&t, &z6(&[0]), &z6(&[2])).unwrap();
        let r = refute_by_branching(&pc, 8);
        assert!(r.is_closed());
        let file = r.tree().to_file();
        let rep = replay_tree(&file).unwrap();
        assert!(rep.closed);
        assert_eq!(rep.nodes, r.tree().root.size());
    }

    #[test]
    fn replay_rejects_tampering() {
        let t = z6(&[0, 1]);
        let pc = PartialCover::new(&t, &z6(&[0]), &z6(&[2])).unwrap();
        let mut file = refute_by_branching(&pc, 8).tree().to_file();
        file.outside.clear();
        assert!(replay_tree(&file).is_err() || !replay_tree(&file).unwrap().closed);
    }

    #[test]
    fn six_cycle_zero_dual_refutes() {
        let g = Group::uniform(6, 4).unwrap();
        let t = PointSet::new(&g, [0]);
        let p = PointSet::new(&g, [g.reduce(&[3, 4, 4, 4]).unwrap()]);
        let r = six_cycle_conclusion(&t, &p, &PointSet::singleton(&g, 0)).unwrap();
        assert!(!r.all_vanish);
        assert_eq!(r.sums[0].exponent, 0);
    }
}
