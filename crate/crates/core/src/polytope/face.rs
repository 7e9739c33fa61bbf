//! Face systems: sets of equations, each the tight form of a catalogued valid
//! inequality of `COR(G)`, and enumeration of the vertices on such a face.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{check_valid_inequality, CorVertex, LinearInequality, Sense};
use crate::error::{Error, Result};
use crate::graph::{Graph, VariableId};
use crate::rational::{self, int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FaceTag {
    /// `x_uv = 0`, tight form of `x_uv >= 0`.
    #[serde(rename = "NONNEG-EDGE")]
    NonnegEdge,
    /// `x_w = x_uv` for an endpoint `w`, tight form of `x_uv <= x_w`.
    #[serde(rename = "EDGE-EQ")]
    EdgeEq,
    /// `x_u + x_v - 2 x_uv = 1`, tight form of the `<= 1` inequality.
    #[serde(rename = "XOR")]
    Xor,
    /// `x_a + x_b + x_c - 2(x_ab + x_ac + x_bc) = 1`, tight form of `<= 1`.
    #[serde(rename = "ONE-OF-THREE")]
    OneOfThree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub tag: FaceTag,
    pub vars: Vec<VariableId>,
    #[serde(with = "rational::vec")]
    pub coeffs: Vec<Rational>,
    #[serde(with = "rational")]
    pub rhs: Rational,
}

impl Equation {
    pub fn nonneg_edge(u: &str, v: &str) -> Self {
        Equation {
            tag: FaceTag::NonnegEdge,
            vars: vec![VariableId::edge(u, v)],
            coeffs: vec![int(1)],
            rhs: int(0),
        }
    }

    /// `x_w = x_uv` where `w` is `u` or `v`.
    pub fn edge_eq(w: &str, u: &str, v: &str) -> Self {
        Equation {
            tag: FaceTag::EdgeEq,
            vars: vec![VariableId::vertex(w), VariableId::edge(u, v)],
            coeffs: vec![int(1), int(-1)],
            rhs: int(0),
        }
    }

    /// Both halves of `x_u = x_uv = x_v`.
    pub fn edge_eq_pair(u: &str, v: &str) -> [Self; 2] {
        [Self::edge_eq(u, u, v), Self::edge_eq(v, u, v)]
    }

    pub fn xor(u: &str, v: &str) -> Self {
        Equation {
            tag: FaceTag::Xor,
            vars: vec![
                VariableId::vertex(u),
                VariableId::vertex(v),
                VariableId::edge(u, v),
            ],
            coeffs: vec![int(1), int(1), int(-2)],
            rhs: int(1),
        }
    }

    pub fn one_of_three(a: &str, b: &str, c: &str) -> Self {
        Equation {
            tag: FaceTag::OneOfThree,
            vars: vec![
                VariableId::vertex(a),
                VariableId::vertex(b),
                VariableId::vertex(c),
                VariableId::edge(a, b),
                VariableId::edge(a, c),
                VariableId::edge(b, c),
            ],
            coeffs: vec![int(1), int(1), int(1), int(-2), int(-2), int(-2)],
            rhs: int(1),
        }
    }

    fn terms(&self) -> Result<BTreeMap<&VariableId, &Rational>> {
        if self.vars.len() != self.coeffs.len() {
            return Err(Error::IllFormedEquation(format!(
                "{:?}: {} variables but {} coefficients",
                self.tag,
                self.vars.len(),
                self.coeffs.len()
            )));
        }
        let mut m = BTreeMap::new();
        for (v, c) in self.vars.iter().zip(&self.coeffs) {
            if m.insert(v, c).is_some() {
                return Err(Error::IllFormedEquation(format!(
                    "{:?}: `{v}` appears twice",
                    self.tag
                )));
            }
        }
        Ok(m)
    }

    /// Checks that the equation is exactly an instance of its tag's template.
    pub fn check_shape(&self) -> Result<()> {
        let terms = self.terms()?;
        let bad = |why: &str| {
            Err(Error::IllFormedEquation(format!(
                "{:?} {}: {why}",
                self.tag,
                self.describe()
            )))
        };
        let (verts, edges): (Vec<_>, Vec<_>) = terms
            .iter()
            .partition(|(v, _)| matches!(v, VariableId::Vertex(_)));
        let vlabels: BTreeSet<&str> = verts.iter().flat_map(|(v, _)| v.endpoints()).collect();
        let all =
            |list: &[(&&VariableId, &&Rational)], c: i64| list.iter().all(|(_, x)| ***x == int(c));
        match self.tag {
            FaceTag::NonnegEdge => {
                if !(verts.is_empty() && edges.len() == 1 && all(&edges, 1) && self.rhs.is_zero()) {
                    return bad("expected x_uv = 0");
                }
            }
            FaceTag::EdgeEq => {
                let ok = verts.len() == 1
                    && edges.len() == 1
                    && self.rhs.is_zero()
                    && edges[0].0.endpoints().contains(&verts[0].0.endpoints()[0])
                    && (*verts[0].1 + *edges[0].1).is_zero()
                    && verts[0].1.abs().is_one();
                if !ok {
                    return bad("expected x_w - x_uv = 0 with w an endpoint of uv");
                }
            }
            FaceTag::Xor => {
                let ok = verts.len() == 2
                    && edges.len() == 1
                    && all(&verts, 1)
                    && all(&edges, -2)
                    && self.rhs == int(1)
                    && edges[0]
                        .0
                        .endpoints()
                        .iter()
                        .copied()
                        .collect::<BTreeSet<_>>()
                        == vlabels;
                if !ok {
                    return bad("expected x_u + x_v - 2x_uv = 1");
                }
            }
            FaceTag::OneOfThree => {
                let want: BTreeSet<VariableId> = {
                    let l: Vec<&str> = vlabels.iter().copied().collect();
                    if l.len() == 3 {
                        [(0, 1), (0, 2), (1, 2)]
                            .iter()
                            .map(|&(i, j)| VariableId::edge(l[i], l[j]))
                            .collect()
                    } else {
                        BTreeSet::new()
                    }
                };
                let have: BTreeSet<VariableId> = edges.iter().map(|(v, _)| (**v).clone()).collect();
                let ok = verts.len() == 3
                    && all(&verts, 1)
                    && all(&edges, -2)
                    && self.rhs == int(1)
                    && have == want;
                if !ok {
                    return bad("expected x_a + x_b + x_c - 2(x_ab + x_ac + x_bc) = 1");
                }
            }
        }
        Ok(())
    }

    /// The valid inequality this equation is the tight form of.
    pub fn inequality(&self) -> LinearInequality {
        let terms: Vec<(VariableId, Rational)> = self
            .vars
            .iter()
            .cloned()
            .zip(self.coeffs.iter().cloned())
            .collect();
        match self.tag {
            FaceTag::NonnegEdge => LinearInequality {
                terms,
                sense: Sense::Ge,
                rhs: self.rhs.clone(),
            },
            FaceTag::EdgeEq => {
                // orient as x_w - x_uv >= 0
                let flip = terms
                    .iter()
                    .any(|(v, c)| matches!(v, VariableId::Vertex(_)) && c.is_negative());
                let terms = if flip {
                    terms.into_iter().map(|(v, c)| (v, -c)).collect()
                } else {
                    terms
                };
                LinearInequality {
                    terms,
                    sense: Sense::Ge,
                    rhs: Rational::zero(),
                }
            }
            FaceTag::Xor | FaceTag::OneOfThree => LinearInequality {
                terms,
                sense: Sense::Le,
                rhs: self.rhs.clone(),
            },
        }
    }

    /// Vertex labels touched by the equation.
    pub fn support(&self) -> Vec<&str> {
        let s: BTreeSet<&str> = self.vars.iter().flat_map(VariableId::endpoints).collect();
        s.into_iter().collect()
    }

    fn describe(&self) -> String {
        let lhs: Vec<String> = self
            .vars
            .iter()
            .zip(&self.coeffs)
            .map(|(v, c)| format!("{c}·x[{v}]"))
            .collect();
        format!("{} = {}", lhs.join(" + "), self.rhs)
    }
}

/// Serialized as a plain JSON list of equations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceSystem {
    pub equations: Vec<Equation>,
}

impl FaceSystem {
    pub fn new(equations: Vec<Equation>) -> Self {
        FaceSystem { equations }
    }

    pub fn push(&mut self, eq: Equation) {
        if !self.equations.contains(&eq) {
            self.equations.push(eq);
        }
    }

    pub fn extend(&mut self, eqs: impl IntoIterator<Item = Equation>) {
        for e in eqs {
            self.push(e);
        }
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Every equation has a catalogue shape and references variables of `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for eq in &self.equations {
            eq.check_shape()?;
            for v in &eq.vars {
                if !g.contains_variable(v) {
                    return Err(Error::IllFormedEquation(format!(
                        "{:?} references unknown variable `{v}`",
                        eq.tag
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_satisfied_by(&self, g: &Graph, v: &CorVertex) -> Result<bool> {
        for eq in &self.equations {
            let mut lhs = Rational::zero();
            for (var, c) in eq.vars.iter().zip(&eq.coeffs) {
                if v.value(g, var)
                    .ok_or_else(|| Error::UnknownVariable(var.to_string()))?
                {
                    lhs += c;
                }
            }
            if lhs != eq.rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("face system json")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Checks the equation's underlying inequality on `COR` of the subgraph
/// induced by its support.
pub fn equation_is_locally_valid(g: &Graph, eq: &Equation) -> Result<bool> {
    eq.check_shape()?;
    let local = g.induced(&eq.support())?;
    check_valid_inequality(&local, &eq.inequality())
}

// --- face enumeration -------------------------------------------------------

/// An equation over vertex indices: `Σ coef · Π_{i∈factors} x_i = rhs`.
struct Compiled {
    terms: Vec<(i64, Vec<usize>)>,
    rhs: i64,
    support: Vec<usize>,
}

impl Compiled {
    fn new(g: &Graph, eq: &Equation) -> Result<Self> {
        let scale =
            Rational::from_integer(rational::denominator_lcm(eq.coeffs.iter().chain([&eq.rhs])));
        let to_i64 = |r: &Rational| -> Result<i64> {
            (r * &scale)
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::IllFormedEquation("coefficient out of range".into()))
        };
        let mut terms = Vec::new();
        let mut support = BTreeSet::new();
        for (var, c) in eq.vars.iter().zip(&eq.coeffs) {
            let idx: Vec<usize> = var
                .endpoints()
                .iter()
                .map(|l| {
                    g.index_of(l)
                        .ok_or_else(|| Error::UnknownVariable(var.to_string()))
                })
                .collect::<Result<_>>()?;
            support.extend(idx.iter().copied());
            terms.push((to_i64(c)?, idx));
        }
        Ok(Compiled {
            terms,
            rhs: to_i64(&eq.rhs)?,
            support: support.into_iter().collect(),
        })
    }

    fn eval(&self, x: &[Option<bool>]) -> i64 {
        self.terms
            .iter()
            .filter(|(_, f)| f.iter().all(|&i| x[i] == Some(true)))
            .map(|(c, _)| c)
            .sum()
    }
}

struct FaceSearch<'a> {
    eqs: &'a [Compiled],
    watch: Vec<Vec<usize>>,
    order: Vec<usize>,
    assign: Vec<Option<bool>>,
    trail: Vec<usize>,
    out: Vec<CorVertex>,
    limit: usize,
}

impl FaceSearch<'_> {
    fn set(&mut self, i: usize, val: bool) {
        self.assign[i] = Some(val);
        self.trail.push(i);
    }

    fn undo(&mut self, to: usize) {
        while self.trail.len() > to {
            let i = self.trail.pop().unwrap();
            self.assign[i] = None;
        }
    }

    /// Generalised arc consistency per equation: enumerate completions of the
    /// equation's unassigned support, force values common to all of them.
    fn propagate(&mut self, mut queue: VecDeque<usize>) -> bool {
        let mut queued = vec![false; self.eqs.len()];
        for &e in &queue {
            queued[e] = true;
        }
        while let Some(e) = queue.pop_front() {
            queued[e] = false;
            let eq = &self.eqs[e];
            let free: Vec<usize> = eq
                .support
                .iter()
                .copied()
                .filter(|&i| self.assign[i].is_none())
                .collect();
            let mut can = vec![[false; 2]; free.len()];
            let mut any = false;
            let mut x = self.assign.clone();
            for bits in 0u32..1 << free.len() {
                for (k, &i) in free.iter().enumerate() {
                    x[i] = Some(bits >> k & 1 == 1);
                }
                if eq.eval(&x) == eq.rhs {
                    any = true;
                    for (k, c) in can.iter_mut().enumerate() {
                        c[(bits >> k & 1) as usize] = true;
                    }
                }
            }
            if !any {
                return false;
            }
            for (k, &i) in free.iter().enumerate() {
                let forced = match can[k] {
                    [true, false] => false,
                    [false, true] => true,
                    _ => continue,
                };
                self.set(i, forced);
                for &f in &self.watch[i] {
                    if !queued[f] {
                        queued[f] = true;
                        queue.push_back(f);
                    }
                }
            }
        }
        true
    }

    fn search(&mut self, from: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        let Some(p) = (from..self.order.len()).find(|&p| self.assign[self.order[p]].is_none())
        else {
            self.out.push(CorVertex::from_members(
                self.assign.iter().map(|x| x.unwrap()).collect(),
            ));
            return;
        };
        let i = self.order[p];
        for val in [false, true] {
            let mark = self.trail.len();
            self.set(i, val);
            let q = self.watch[i].iter().copied().collect();
            if self.propagate(q) {
                self.search(p + 1);
            }
            self.undo(mark);
        }
    }
}

/// Vertices of `COR(G)` on the face cut out by `fs`, in bitmask order.
pub fn restrict_to_face(g: &Graph, fs: &FaceSystem) -> Result<Vec<CorVertex>> {
    restrict_to_face_with(g, fs, &[])
}

/// [`restrict_to_face`] branching first on `priority` (in the given order),
/// then on the remaining vertices in label order.
pub fn restrict_to_face_with(
    g: &Graph,
    fs: &FaceSystem,
    priority: &[&str],
) -> Result<Vec<CorVertex>> {
    Ok(FaceQuery::new(priority).run(g, fs)?.vertices)
}

/// Options for a face enumeration: clamped vertex values, branching
/// priority, and a cap on the number of vertices collected.
#[derive(Clone, Debug, Default)]
pub struct FaceQuery<'a> {
    pub priority: &'a [&'a str],
    pub fixed: Vec<(&'a str, bool)>,
    pub limit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceEnumeration {
    /// Sorted in bitmask order.
    pub vertices: Vec<CorVertex>,
    /// The limit was hit; more vertices may exist.
    pub truncated: bool,
}

impl<'a> FaceQuery<'a> {
    pub fn new(priority: &'a [&'a str]) -> Self {
        FaceQuery {
            priority,
            ..Default::default()
        }
    }

    pub fn fix(mut self, label: &'a str, value: bool) -> Self {
        self.fixed.push((label, value));
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn run(&self, g: &Graph, fs: &FaceSystem) -> Result<FaceEnumeration> {
        fs.validate(g)?;
        let eqs: Vec<Compiled> = fs
            .equations
            .iter()
            .map(|e| Compiled::new(g, e))
            .collect::<Result<_>>()?;
        let mut watch = vec![Vec::new(); g.n()];
        for (k, e) in eqs.iter().enumerate() {
            for &i in &e.support {
                watch[i].push(k);
            }
        }
        let lookup = |l: &str| {
            g.index_of(l)
                .ok_or_else(|| Error::UnknownVariable(l.to_string()))
        };
        let mut order = Vec::with_capacity(g.n());
        let mut placed = vec![false; g.n()];
        for l in self.priority {
            let i = lookup(l)?;
            if !placed[i] {
                placed[i] = true;
                order.push(i);
            }
        }
        order.extend((0..g.n()).filter(|&i| !placed[i]));

        let limit = self.limit.unwrap_or(usize::MAX);
        let mut s = FaceSearch {
            eqs: &eqs,
            watch,
            order,
            assign: vec![None; g.n()],
            trail: Vec::new(),
            out: Vec::new(),
            limit: limit.saturating_add(1),
        };
        let mut consistent = true;
        for &(l, v) in &self.fixed {
            let i = lookup(l)?;
            match s.assign[i] {
                Some(w) if w != v => consistent = false,
                _ => s.set(i, v),
            }
        }
        if consistent && s.propagate((0..eqs.len()).collect()) {
            s.search(0);
        }
        let mut vertices = s.out;
        let truncated = vertices.len() > limit;
        vertices.sort();
        vertices.truncate(limit);
        Ok(FaceEnumeration {
            vertices,
            truncated,
        })
    }
}
