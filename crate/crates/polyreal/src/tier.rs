//! Static tier checking.
//!
//! Signatures are synthesized bottom-up. In a composition node the argument
//! terms share one ambient signature `(m;n)`: safe-position terms have
//! exactly `(m;n)`, normal-position terms have `(m;0)`. A term whose value
//! depends on safe arguments can never sit in a normal position
//! (`safe-into-normal`), which is the one-way door of the discipline.
//!
//! Two relaxations keep the algebra usable without weakening that door:
//! closed terms (signature `(0;0)`, constants and the like) fit any ambient
//! position, and a term of signature `(m;0)` fits an ambient `(m;n)` --
//! neither has safe arguments, so no safe value can leak through them.
//! All other weakening must be written with explicit projection wrappers
//! (see [`crate::builders::weaken`]).
//!
//! Recursion nodes `(si g h0 h1)` (and the discrete `srec`) synthesize
//! `(1+p; q)` where `g` fits `(p;q)` and both step functions fit
//! `(1+p; q+1)`: the recursion variable and its halvings stay normal, the
//! previous value arrives in the last safe slot.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::term::{Signature, Term};

/// One broken rule, located by the path of child indices from the root.
/// Composition children are numbered `h = 0`, then the normal vector, then
/// the safe vector; recursion children are `g = 0`, `h0 = 1`, `h1 = 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: Vec<u32>,
    pub rule: &'static str,
    pub detail: String,
}

/// Result of a tier check. `accepted` exactly when no violations were found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub accepted: bool,
    pub signature: Option<Signature>,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn path_string(path: &[u32]) -> String {
        if path.is_empty() {
            "/".to_string()
        } else {
            path.iter().map(|i| format!("/{i}")).collect()
        }
    }
}

/// Does a child of signature `child` fit a position requiring `required`?
pub(crate) fn fits(child: Signature, required: Signature) -> bool {
    child == required
        || (child.safe == 0 && (child.normal == 0 || child.normal == required.normal))
}

/// Node shapes shared by the real and the discrete algebra, so one checker
/// serves both.
pub(crate) enum NodeView<'a, T> {
    Leaf { sig: Signature, proj_index: Option<u32> },
    Comp { h: &'a T, normals: &'a [T], safes: &'a [T] },
    Rec { g: &'a T, h0: &'a T, h1: &'a T },
}

pub(crate) trait TierNode: Sized {
    fn view(&self) -> NodeView<'_, Self>;
}

impl TierNode for Term {
    fn view(&self) -> NodeView<'_, Self> {
        match self {
            Term::Zero | Term::One => {
                NodeView::Leaf { sig: Signature::new(0, 0), proj_index: None }
            }
            Term::Add | Term::Sub => {
                NodeView::Leaf { sig: Signature::new(0, 2), proj_index: None }
            }
            Term::Cond => NodeView::Leaf { sig: Signature::new(0, 3), proj_index: None },
            Term::Parity | Term::Pred => {
                NodeView::Leaf { sig: Signature::new(0, 1), proj_index: None }
            }
            Term::Proj { normal, safe, index } => NodeView::Leaf {
                sig: Signature::new(*normal, *safe),
                proj_index: Some(*index),
            },
            Term::Comp { h, normals, safes } => NodeView::Comp { h, normals, safes },
            Term::Si { g, h0, h1 } => NodeView::Rec { g, h0, h1 },
        }
    }
}

struct Checker {
    violations: Vec<Violation>,
    /// `(path, signature)` for every node that synthesized cleanly.
    sigs: Vec<(Vec<u32>, Signature)>,
}

impl Checker {
    fn violate(&mut self, path: &[u32], rule: &'static str, detail: String) {
        self.violations.push(Violation { path: path.to_vec(), rule, detail });
    }

    fn synth<T: TierNode>(&mut self, t: &T, path: &mut Vec<u32>) -> Option<Signature> {
        let sig = match t.view() {
            NodeView::Leaf { sig, proj_index } => {
                if let Some(i) = proj_index {
                    if i < 1 || i > sig.arity() {
                        self.violate(
                            path,
                            "proj-index",
                            format!("index {i} outside 1..={}", sig.arity()),
                        );
                        return None;
                    }
                }
                Some(sig)
            }
            NodeView::Comp { h, normals, safes } => {
                self.synth_comp(h, normals, safes, path)
            }
            NodeView::Rec { g, h0, h1 } => self.synth_rec(g, h0, h1, path),
        };
        if let Some(sig) = sig {
            self.sigs.push((path.clone(), sig));
        }
        sig
    }

    fn child<T: TierNode>(
        &mut self,
        t: &T,
        path: &mut Vec<u32>,
        index: u32,
    ) -> Option<Signature> {
        path.push(index);
        let sig = self.synth(t, path);
        path.pop();
        sig
    }

    fn synth_comp<T: TierNode>(
        &mut self,
        h: &T,
        normals: &[T],
        safes: &[T],
        path: &mut Vec<u32>,
    ) -> Option<Signature> {
        let sig_h = self.child(h, path, 0);
        let mut child_sigs = Vec::new();
        let mut poisoned = false;
        for (offset, term) in normals.iter().chain(safes.iter()).enumerate() {
            let idx = offset as u32 + 1;
            match self.child(term, path, idx) {
                Some(sig) => child_sigs.push((idx, sig, offset < normals.len())),
                None => poisoned = true,
            }
        }
        let mut broken = poisoned;
        if let Some(sig_h) = sig_h {
            let required = Signature::new(normals.len() as u32, safes.len() as u32);
            if sig_h != required {
                self.violate(
                    path,
                    "comp-h-arity",
                    format!("h has signature {sig_h}, composition supplies {required}"),
                );
                broken = true;
            }
        } else {
            broken = true;
        }
        // Unify the ambient signature over the argument vectors.
        let mut ambient_m: Option<u32> = None;
        let mut ambient_n: Option<u32> = None;
        let merge = |slot: &mut Option<u32>, value: u32| -> bool {
            match slot {
                Some(v) if *v != value => false,
                _ => {
                    *slot = Some(value);
                    true
                }
            }
        };
        for (idx, sig, is_normal) in &child_sigs {
            if *is_normal && sig.safe > 0 {
                path.push(*idx);
                self.violate(
                    path,
                    "safe-into-normal",
                    format!("term of signature {sig} placed in a normal position"),
                );
                path.pop();
                broken = true;
                continue;
            }
            if sig.is_closed() {
                continue;
            }
            let mut ok = merge(&mut ambient_m, sig.normal);
            if sig.safe > 0 {
                ok &= merge(&mut ambient_n, sig.safe);
            }
            if !ok {
                self.violate(
                    path,
                    "ambient-mismatch",
                    format!("argument {idx} of signature {sig} conflicts with the ambient"),
                );
                broken = true;
            }
        }
        if broken {
            return None;
        }
        let ambient = Signature::new(ambient_m.unwrap_or(0), ambient_n.unwrap_or(0));
        // Final fit check; the unification above catches almost everything,
        // this keeps the rule local and explicit.
        for (idx, sig, is_normal) in &child_sigs {
            let required = if *is_normal {
                Signature::new(ambient.normal, 0)
            } else {
                ambient
            };
            if !fits(*sig, required) {
                self.violate(
                    path,
                    "ambient-mismatch",
                    format!("argument {idx} of signature {sig} does not fit {required}"),
                );
                return None;
            }
        }
        Some(ambient)
    }

    fn synth_rec<T: TierNode>(
        &mut self,
        g: &T,
        h0: &T,
        h1: &T,
        path: &mut Vec<u32>,
    ) -> Option<Signature> {
        let sig_g = self.child(g, path, 0);
        let sig_h0 = self.child(h0, path, 1);
        let sig_h1 = self.child(h1, path, 2);
        let (sig_g, sig_h0, sig_h1) = match (sig_g, sig_h0, sig_h1) {
            (Some(a), Some(b), Some(c)) => (a, b, c),
            _ => return None,
        };
        let mut p: Option<u32> = None;
        let mut q: Option<u32> = None;
        let mut conflict = false;
        let merge = |slot: &mut Option<u32>, value: u32, conflict: &mut bool| {
            match slot {
                Some(v) if *v != value => *conflict = true,
                _ => *slot = Some(value),
            }
        };
        // Pin (p; q) from whichever components constrain it.
        if !sig_g.is_closed() {
            merge(&mut p, sig_g.normal, &mut conflict);
            if sig_g.safe > 0 {
                merge(&mut q, sig_g.safe, &mut conflict);
            }
        }
        for sig_h in [sig_h0, sig_h1] {
            if sig_h.is_closed() {
                continue;
            }
            if sig_h.normal == 0 {
                conflict = true;
                continue;
            }
            merge(&mut p, sig_h.normal - 1, &mut conflict);
            if sig_h.safe > 0 {
                merge(&mut q, sig_h.safe.saturating_sub(1), &mut conflict);
            }
        }
        let p = p.unwrap_or(0);
        let q = q.unwrap_or(0);
        let step = Signature::new(p + 1, q + 1);
        if conflict
            || !fits(sig_g, Signature::new(p, q))
            || !fits(sig_h0, step)
            || !fits(sig_h1, step)
        {
            self.violate(
                path,
                "si-arity",
                format!(
                    "components g:{sig_g} h0:{sig_h0} h1:{sig_h1} do not fit g:({p};{q}) h:({};{})",
                    p + 1,
                    q + 1
                ),
            );
            return None;
        }
        Some(Signature::new(p + 1, q))
    }
}

pub(crate) fn check_generic<T: TierNode>(t: &T) -> (CheckReport, Vec<(Vec<u32>, Signature)>) {
    let mut checker = Checker { violations: Vec::new(), sigs: Vec::new() };
    let mut path = Vec::new();
    let signature = checker.synth(t, &mut path);
    let report = CheckReport {
        accepted: checker.violations.is_empty() && signature.is_some(),
        signature,
        violations: checker.violations,
    };
    (report, checker.sigs)
}

/// Checks a term of the real algebra. Violations are data, not errors.
pub fn check_tiers(t: &Term) -> CheckReport {
    check_generic(t).0
}

/// A tier-checked term: every node carries its synthesized signature and a
/// dense node id (used as a memo key by the evaluator).
#[derive(Clone, Debug)]
pub struct CheckedTerm {
    root: CheckedNode,
    node_count: u32,
}

#[derive(Clone, Debug)]
pub(crate) struct CheckedNode {
    pub kind: CheckedKind,
    pub sig: Signature,
    pub id: u32,
}

#[derive(Clone, Debug)]
pub(crate) enum CheckedKind {
    Zero,
    One,
    Add,
    Sub,
    Proj { index: u32 },
    Cond,
    Parity,
    Pred,
    Comp { h: Box<CheckedNode>, normals: Vec<CheckedNode>, safes: Vec<CheckedNode> },
    Si { g: Box<CheckedNode>, h0: Box<CheckedNode>, h1: Box<CheckedNode> },
}

impl CheckedTerm {
    /// Runs the tier checker and annotates the tree. Fails on rejection.
    pub fn new(t: &Term) -> Result<Self> {
        let (report, sigs) = check_generic(t);
        if !report.accepted {
            return Err(Error::IllTiered { violations: report.violations.len() });
        }
        let lookup: std::collections::HashMap<Vec<u32>, Signature> = sigs.into_iter().collect();
        let mut next_id = 0;
        let mut path = Vec::new();
        let root = annotate(t, &lookup, &mut path, &mut next_id)?;
        Ok(Self { root, node_count: next_id })
    }

    pub fn signature(&self) -> Signature {
        self.root.sig
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub(crate) fn root(&self) -> &CheckedNode {
        &self.root
    }
}

fn annotate(
    t: &Term,
    lookup: &std::collections::HashMap<Vec<u32>, Signature>,
    path: &mut Vec<u32>,
    next_id: &mut u32,
) -> Result<CheckedNode> {
    let sig = *lookup
        .get(path)
        .ok_or(Error::IllTiered { violations: 1 })?;
    let id = *next_id;
    *next_id += 1;
    let child = |t: &Term, idx: u32, next_id: &mut u32, path: &mut Vec<u32>| -> Result<CheckedNode> {
        path.push(idx);
        let node = annotate(t, lookup, path, next_id);
        path.pop();
        node
    };
    let kind = match t {
        Term::Zero => CheckedKind::Zero,
        Term::One => CheckedKind::One,
        Term::Add => CheckedKind::Add,
        Term::Sub => CheckedKind::Sub,
        Term::Cond => CheckedKind::Cond,
        Term::Parity => CheckedKind::Parity,
        Term::Pred => CheckedKind::Pred,
        Term::Proj { index, .. } => CheckedKind::Proj { index: *index },
        Term::Comp { h, normals, safes } => {
            let h_node = child(h, 0, next_id, path)?;
            let mut normal_nodes = Vec::with_capacity(normals.len());
            for (i, g) in normals.iter().enumerate() {
                normal_nodes.push(child(g, i as u32 + 1, next_id, path)?);
            }
            let mut safe_nodes = Vec::with_capacity(safes.len());
            for (i, g) in safes.iter().enumerate() {
                safe_nodes.push(child(g, (normals.len() + i) as u32 + 1, next_id, path)?);
            }
            CheckedKind::Comp { h: Box::new(h_node), normals: normal_nodes, safes: safe_nodes }
        }
        Term::Si { g, h0, h1 } => CheckedKind::Si {
            g: Box::new(child(g, 0, next_id, path)?),
            h0: Box::new(child(h0, 1, next_id, path)?),
            h1: Box::new(child(h1, 2, next_id, path)?),
        },
    };
    Ok(CheckedNode { kind, sig, id })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;
    use crate::term::parse;

    #[test]
    fn basic_signatures() {
        let report = check_tiers(&Term::Add);
        assert!(report.accepted);
        assert_eq!(report.signature, Some(Signature::new(0, 2)));
        assert!(check_tiers(&Term::Parity).accepted);
    }

    #[test]
    fn nat_id_accepted_with_expected_signature() {
        let report = check_tiers(&builders::nat_id());
        assert!(report.accepted, "{:?}", report.violations);
        assert_eq!(report.signature, Some(Signature::new(1, 0)));
    }

    #[test]
    fn derived_builders_accepted() {
        for (t, sig) in [
            (builders::succ0(), Signature::new(0, 1)),
            (builders::succ1(), Signature::new(0, 1)),
            (builders::pred_shift(), Signature::new(0, 1)),
            (builders::cond_discrete(), Signature::new(0, 3)),
            (Term::int_const(9), Signature::new(0, 0)),
        ] {
            let report = check_tiers(&t);
            assert!(report.accepted, "{t}: {:?}", report.violations);
            assert_eq!(report.signature, Some(sig), "{t}");
        }
    }

    #[test]
    fn safe_into_normal_rejected() {
        // An si-produced term with a safe argument, placed in a normal slot.
        let with_safe = Term::si(
            Term::proj(0, 1, 1),
            Term::proj(1, 2, 3),
            Term::proj(1, 2, 3),
        );
        assert_eq!(check_tiers(&with_safe).signature, Some(Signature::new(1, 1)));
        let bad = Term::comp(Term::proj(1, 0, 1), vec![with_safe], vec![]);
        let report = check_tiers(&bad);
        assert!(!report.accepted);
        assert_eq!(report.violations.len(), 1);
        let v = &report.violations[0];
        assert_eq!(v.rule, "safe-into-normal");
        assert_eq!(v.path, vec![1]);
    }

    #[test]
    fn ambient_mismatch_rejected() {
        let bad = Term::comp(Term::Add, vec![], vec![Term::proj(0, 1, 1), Term::proj(0, 2, 1)]);
        let report = check_tiers(&bad);
        assert!(!report.accepted);
        assert!(report.violations.iter().any(|v| v.rule == "ambient-mismatch"));
    }

    #[test]
    fn comp_h_arity_rejected() {
        let bad = Term::comp(Term::Add, vec![], vec![Term::proj(0, 1, 1)]);
        let report = check_tiers(&bad);
        assert!(!report.accepted);
        assert_eq!(report.violations[0].rule, "comp-h-arity");
        assert!(report.violations[0].path.is_empty());
    }

    #[test]
    fn proj_index_rejected() {
        let report = check_tiers(&Term::proj(1, 1, 3));
        assert!(!report.accepted);
        assert_eq!(report.violations[0].rule, "proj-index");
    }

    #[test]
    fn si_arity_conflicts_rejected() {
        let bad = Term::si(Term::proj(1, 0, 1), Term::proj(1, 1, 2), Term::proj(2, 1, 2));
        let report = check_tiers(&bad);
        assert!(!report.accepted);
        assert!(report.violations.iter().any(|v| v.rule == "si-arity"));
    }

    #[test]
    fn closed_terms_fit_any_ambient() {
        // 1 + v at signature (1;1): the constant adopts the ambient.
        let t = Term::comp(Term::Add, vec![], vec![Term::One, Term::proj(1, 1, 2)]);
        let report = check_tiers(&t);
        assert!(report.accepted, "{:?}", report.violations);
        assert_eq!(report.signature, Some(Signature::new(1, 1)));
    }

    #[test]
    fn normal_only_terms_fit_safe_padded_ambient() {
        // h components of signature (1;0) fit the (1;1) slot of si.
        let double = Term::comp(Term::Add, vec![], vec![Term::proj(1, 0, 1), Term::proj(1, 0, 1)]);
        let t = Term::si(Term::Zero, double.clone(), double);
        let report = check_tiers(&t);
        assert!(report.accepted, "{:?}", report.violations);
        assert_eq!(report.signature, Some(Signature::new(1, 0)));
    }

    #[test]
    fn deep_violation_path() {
        // Bury a safe-into-normal violation one level down.
        let with_safe =
            Term::si(Term::proj(0, 1, 1), Term::proj(1, 2, 3), Term::proj(1, 2, 3));
        let inner_bad = Term::comp(Term::proj(1, 0, 1), vec![with_safe], vec![]);
        let outer = Term::comp(
            Term::Add,
            vec![],
            vec![inner_bad, Term::proj(0, 2, 2)],
        );
        let report = check_tiers(&outer);
        assert!(!report.accepted);
        let v = report.violations.iter().find(|v| v.rule == "safe-into-normal").unwrap();
        assert_eq!(v.path, vec![1, 1]);
        assert_eq!(CheckReport::path_string(&v.path), "/1/1");
    }

    #[test]
    fn checked_term_annotates_nodes() {
        let checked = CheckedTerm::new(&builders::nat_id()).unwrap();
        assert_eq!(checked.signature(), Signature::new(1, 0));
        assert!(checked.node_count() >= 4);
        assert!(CheckedTerm::new(&Term::proj(1, 1, 5)).is_err());
    }

    #[test]
    fn parse_then_check_example() {
        let t = parse("(comp (add) () ((proj 0 1 1) (proj 0 1 1)))").unwrap();
        let report = check_tiers(&t);
        assert!(report.accepted);
        assert_eq!(report.signature, Some(Signature::new(0, 1)));
    }
}
