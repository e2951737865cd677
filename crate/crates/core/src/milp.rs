//! Big-M mixed-integer model whose optimum is `c_w`, written in LP text
//! format, plus an exact checker for candidate assignments.
//!
//! The model maximizes `Σ c_e x_e` over capacities `u` and flows `x` that are
//! optimal for `u`. Optimality is encoded by node potentials `π` and the
//! complementary slackness implications `c^π_e > 0 ⟹ x_e = 0` and
//! `c^π_e < 0 ⟹ x_e = u_e`, linearized with binaries `y_e` and `z_e`.
//!
//! The emitter and the checker share one row list, so the rows that get
//! checked are exactly the rows that get written.

use std::fmt::{self, Write as _};

use crate::mcf::Potentials;
use crate::model::{ArcId, Flow, Instance, NodeId, Scenario};

/// A model variable. Arc variables are indexed by arc id, `Pi` by node id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X(ArcId),
    U(ArcId),
    Pi(NodeId),
    Alpha(ArcId),
    Cpi(ArcId),
    Y(ArcId),
    Z(ArcId),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(e) => write!(f, "x_{e}"),
            Var::U(e) => write!(f, "u_{e}"),
            Var::Pi(k) => write!(f, "pi_{k}"),
            Var::Alpha(e) => write!(f, "alpha_{e}"),
            Var::Cpi(e) => write!(f, "cpi_{e}"),
            Var::Y(e) => write!(f, "y_{e}"),
            Var::Z(e) => write!(f, "z_{e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }

    fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            Sense::Le => lhs <= rhs,
            Sense::Ge => lhs >= rhs,
            Sense::Eq => lhs == rhs,
        }
    }
}

/// One linear constraint `Σ a·v (sense) rhs`, named `r<seq>` on output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub terms: Vec<(i64, Var)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Row {
    fn new(terms: Vec<(i64, Var)>, sense: Sense, rhs: i64) -> Self {
        Row { terms, sense, rhs }
    }
}

/// A full assignment of the model variables. Arc vectors are indexed by arc
/// id; `pi[k]` belongs to node `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilpAssignment {
    pub x: Vec<i64>,
    pub u: Vec<i64>,
    pub pi: Vec<i64>,
    pub alpha: Vec<i64>,
    pub cpi: Vec<i64>,
    pub y: Vec<i64>,
    pub z: Vec<i64>,
}

impl MilpAssignment {
    pub fn value(&self, var: Var) -> i64 {
        match var {
            Var::X(e) => self.x[e],
            Var::U(e) => self.u[e],
            Var::Pi(k) => self.pi[k - 1],
            Var::Alpha(e) => self.alpha[e],
            Var::Cpi(e) => self.cpi[e],
            Var::Y(e) => self.y[e],
            Var::Z(e) => self.z[e],
        }
    }

    /// Assignment induced by an optimal flow and its certifying potentials:
    /// `α_e = max{0, π_i − π_j − c_e}`, `c^π_e = c_e − π_i + π_j`,
    /// `y_e = [c^π_e > 0]`, `z_e = [c^π_e < 0]`.
    pub fn from_solution(
        instance: &Instance,
        scenario: &Scenario,
        flow: &Flow,
        potentials: &Potentials,
    ) -> Self {
        let cpi: Vec<i64> = instance
            .arcs
            .iter()
            .map(|a| potentials.reduced_cost(instance, a.id))
            .collect();
        MilpAssignment {
            x: flow.values.clone(),
            u: scenario.capacities.clone(),
            pi: potentials.as_slice().to_vec(),
            alpha: cpi.iter().map(|&r| (-r).max(0)).collect(),
            y: cpi.iter().map(|&r| i64::from(r > 0)).collect(),
            z: cpi.iter().map(|&r| i64::from(r < 0)).collect(),
            cpi,
        }
    }
}

/// `M = max{max_e ū_e, 2·Σ_e c_e + max_e c_e}`, and at least 1.
pub fn big_m(instance: &Instance) -> i64 {
    let max_u = instance.arcs.iter().map(|a| a.capacity.upper).max().unwrap_or(0);
    max_u.max(cost_m(instance)).max(1)
}

fn cost_m(instance: &Instance) -> i64 {
    let max_c = instance.arcs.iter().map(|a| a.cost).max().unwrap_or(0);
    2 * instance.total_cost() + max_c
}

/// The big-M constants of one arc: `(flow rows, reduced-cost rows)`.
fn arc_ms(instance: &Instance, arc: ArcId, tighten: bool) -> (i64, i64) {
    if tighten {
        (instance.arcs[arc].capacity.upper.max(1), cost_m(instance).max(1))
    } else {
        let m = big_m(instance);
        (m, m)
    }
}

/// The constraint rows in emission order: one balance row per node, then
/// seven rows per arc.
pub fn model_rows(instance: &Instance, tighten: bool) -> Vec<Row> {
    let mut rows = Vec::with_capacity(instance.num_nodes + 7 * instance.num_arcs());
    let f = instance.flow_amount;
    for k in 1..=instance.num_nodes {
        let mut terms = Vec::new();
        for a in &instance.arcs {
            if a.tail == k {
                terms.push((1, Var::X(a.id)));
            } else if a.head == k {
                terms.push((-1, Var::X(a.id)));
            }
        }
        let rhs = if k == instance.source {
            f
        } else if k == instance.sink {
            -f
        } else {
            0
        };
        rows.push(Row::new(terms, Sense::Eq, rhs));
    }
    for a in &instance.arcs {
        let e = a.id;
        let (mx, mc) = arc_ms(instance, e, tighten);
        let (pi_i, pi_j) = (Var::Pi(a.tail), Var::Pi(a.head));
        rows.push(Row::new(vec![(1, Var::X(e)), (-1, Var::U(e))], Sense::Le, 0));
        rows.push(Row::new(
            vec![(1, pi_i), (-1, pi_j), (-1, Var::Alpha(e))],
            Sense::Le,
            a.cost,
        ));
        rows.push(Row::new(
            vec![(1, Var::Cpi(e)), (1, pi_i), (-1, pi_j)],
            Sense::Eq,
            a.cost,
        ));
        rows.push(Row::new(vec![(1, Var::Cpi(e)), (-mc, Var::Y(e))], Sense::Le, 0));
        rows.push(Row::new(vec![(1, Var::X(e)), (mx, Var::Y(e))], Sense::Le, mx));
        rows.push(Row::new(vec![(1, Var::Cpi(e)), (mc, Var::Z(e))], Sense::Ge, 0));
        rows.push(Row::new(
            vec![(1, Var::U(e)), (-1, Var::X(e)), (mx, Var::Z(e))],
            Sense::Le,
            mx,
        ));
    }
    rows
}

fn write_terms(out: &mut String, terms: &[(i64, Var)]) {
    for (i, &(coef, var)) in terms.iter().enumerate() {
        let sign = if coef < 0 { "-" } else { "+" };
        let abs = coef.abs();
        if i == 0 {
            if coef < 0 {
                out.push_str("- ");
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        if abs == 1 {
            let _ = write!(out, "{var}");
        } else {
            let _ = write!(out, "{abs} {var}");
        }
    }
}

/// Writes the model in LP format. The output depends only on the instance
/// and `tighten`.
pub fn emit_milp(instance: &Instance, tighten: bool) -> String {
    let mut out = String::new();
    out.push_str("\\ worst optimal value model\n");
    let _ = writeln!(
        out,
        "\\ nodes {} arcs {} flow {}",
        instance.num_nodes,
        instance.num_arcs(),
        instance.flow_amount
    );
    out.push_str("Maximize\n obj: ");
    let objective: Vec<(i64, Var)> = instance.arcs.iter().map(|a| (a.cost, Var::X(a.id))).collect();
    if objective.is_empty() {
        out.push('0');
    }
    for (i, &(coef, var)) in objective.iter().enumerate() {
        if i > 0 {
            out.push_str(" + ");
        }
        let _ = write!(out, "{coef} {var}");
    }
    out.push_str("\nSubject To\n");
    for (i, row) in model_rows(instance, tighten).iter().enumerate() {
        let _ = write!(out, " r{}: ", i + 1);
        write_terms(&mut out, &row.terms);
        let _ = writeln!(out, " {} {}", row.sense.symbol(), row.rhs);
    }
    out.push_str("Bounds\n");
    for a in &instance.arcs {
        let _ = writeln!(out, " {} <= u_{} <= {}", a.capacity.lower, a.id, a.capacity.upper);
    }
    for a in &instance.arcs {
        let _ = writeln!(out, " cpi_{} free", a.id);
    }
    for k in 1..=instance.num_nodes {
        let _ = writeln!(out, " pi_{k} free");
    }
    out.push_str("Binary\n");
    for a in &instance.arcs {
        let _ = writeln!(out, " y_{} z_{}", a.id, a.id);
    }
    out.push_str("End\n");
    out
}

/// Every variable occurring in the model, in declaration order.
pub fn model_variables(instance: &Instance) -> Vec<Var> {
    let mut vars = Vec::new();
    for a in &instance.arcs {
        vars.extend([
            Var::X(a.id),
            Var::U(a.id),
            Var::Alpha(a.id),
            Var::Cpi(a.id),
            Var::Y(a.id),
            Var::Z(a.id),
        ]);
    }
    vars.extend((1..=instance.num_nodes).map(Var::Pi));
    vars
}

/// A failed check. Rows are numbered as in the emitted file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MilpViolation {
    Dimension(&'static str),
    Row(usize),
    Bound(Var),
}

impl fmt::Display for MilpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MilpViolation::Dimension(what) => write!(f, "wrong length for {what}"),
            MilpViolation::Row(i) => write!(f, "r{i}"),
            MilpViolation::Bound(v) => write!(f, "bound on {v}"),
        }
    }
}

/// Evaluates every emitted row and bound on `assignment`. Returns the
/// objective `Σ c_e x_e` when all hold, otherwise every violation found.
pub fn check_milp_assignment(
    instance: &Instance,
    assignment: &MilpAssignment,
    tighten: bool,
) -> Result<i64, Vec<MilpViolation>> {
    let m = instance.num_arcs();
    let dims = [
        ("x", assignment.x.len(), m),
        ("u", assignment.u.len(), m),
        ("pi", assignment.pi.len(), instance.num_nodes),
        ("alpha", assignment.alpha.len(), m),
        ("cpi", assignment.cpi.len(), m),
        ("y", assignment.y.len(), m),
        ("z", assignment.z.len(), m),
    ];
    let bad: Vec<_> = dims
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|(name, _, _)| MilpViolation::Dimension(name))
        .collect();
    if !bad.is_empty() {
        return Err(bad);
    }

    let mut violations = Vec::new();
    for (i, row) in model_rows(instance, tighten).iter().enumerate() {
        let lhs: i64 = row
            .terms
            .iter()
            .map(|&(coef, var)| coef * assignment.value(var))
            .sum();
        if !row.sense.holds(lhs, row.rhs) {
            violations.push(MilpViolation::Row(i + 1));
        }
    }
    for a in &instance.arcs {
        let e = a.id;
        let checks = [
            (Var::X(e), assignment.x[e] >= 0),
            (Var::U(e), a.capacity.contains(assignment.u[e])),
            (Var::Alpha(e), assignment.alpha[e] >= 0),
            (Var::Y(e), matches!(assignment.y[e], 0 | 1)),
            (Var::Z(e), matches!(assignment.z[e], 0 | 1)),
        ];
        violations.extend(
            checks
                .into_iter()
                .filter(|&(_, ok)| !ok)
                .map(|(v, _)| MilpViolation::Bound(v)),
        );
    }
    if violations.is_empty() {
        Ok(instance.arcs.iter().map(|a| a.cost * assignment.x[a.id]).sum())
    } else {
        Err(violations)
    }
}
