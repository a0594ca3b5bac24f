//! Value-preserving reductions: constant folding, merging of congruent
//! variables, and substitution of branching rows into same-priority users.

use std::collections::HashMap;

use indexmap::IndexMap;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Equation, FixpointSystem, VarKind};
use crate::graph::ordered_sccs;
use crate::poly::{Monomial, Poly};

struct Work {
    eqs: Vec<Equation>,
    alive: Vec<bool>,
    bindings: IndexMap<String, Poly>,
}

impl Work {
    fn live(&self) -> Vec<usize> {
        (0..self.eqs.len()).filter(|&i| self.alive[i]).collect()
    }

    fn eliminate(&mut self, v: usize, value: Poly) {
        self.alive[v] = false;
        for i in 0..self.eqs.len() {
            if self.alive[i] && self.eqs[i].rhs.mentions(v) {
                self.eqs[i].rhs = self.eqs[i].rhs.substitute(v, &value);
            }
        }
        for p in self.bindings.values_mut() {
            if p.mentions(v) {
                *p = p.substitute(v, &value);
            }
        }
        let name = self.eqs[v].var.clone();
        self.bindings.insert(name, value);
    }

    /// Greatest set of variables closed under dependencies on which the
    /// constant vector `c` is a fixed point; `keep` filters by priority parity.
    fn closed_fixed_set(&self, c: &BigRational, keep: impl Fn(u32) -> bool) -> Vec<usize> {
        let n = self.eqs.len();
        let point = vec![c.clone(); n];
        let mut inside: Vec<bool> = (0..n)
            .map(|i| self.alive[i] && keep(self.eqs[i].priority) && self.eqs[i].rhs.eval(&point) == *c)
            .collect();
        loop {
            let mut changed = false;
            for i in 0..n {
                if inside[i] && self.eqs[i].rhs.vars().iter().any(|&v| !inside[v]) {
                    inside[i] = false;
                    changed = true;
                }
            }
            if !changed {
                return (0..n).filter(|&i| inside[i]).collect();
            }
        }
    }

    fn fold_constants(&mut self) -> bool {
        let mut changed = false;
        let one = BigRational::one();
        let zero = BigRational::zero();
        for i in self.closed_fixed_set(&one, |p| p % 2 == 0) {
            if self.eqs[i].rhs != Poly::one() {
                self.eqs[i].rhs = Poly::one();
                changed = true;
            }
        }
        for i in self.closed_fixed_set(&zero, |p| p % 2 == 1) {
            if !self.eqs[i].rhs.is_zero() {
                self.eqs[i].rhs = Poly::zero();
                changed = true;
            }
        }
        loop {
            let constant = self.live().into_iter().find_map(|i| self.eqs[i].rhs.as_constant().map(|c| (i, c)));
            match constant {
                Some((i, c)) => {
                    self.eliminate(i, Poly::constant(c));
                    changed = true;
                }
                None => return changed,
            }
        }
    }

    /// Coarsest partition by priority that is stable under the right-hand sides.
    fn merge_congruent(&mut self) -> bool {
        let live = self.live();
        let mut block: HashMap<usize, usize> = HashMap::new();
        let mut ids: HashMap<u32, usize> = HashMap::new();
        for &i in &live {
            let next = ids.len();
            block.insert(i, *ids.entry(self.eqs[i].priority).or_insert(next));
        }
        let mut count = ids.len();
        loop {
            let mut keys: HashMap<(usize, Vec<(Monomial, BigRational)>), usize> = HashMap::new();
            let mut next_block = HashMap::new();
            for &i in &live {
                let mapped = self.eqs[i].rhs.map_vars(|v| block[&v]).sorted();
                let sig: Vec<(Monomial, BigRational)> = mapped.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
                let len = keys.len();
                let id = *keys.entry((block[&i], sig)).or_insert(len);
                next_block.insert(i, id);
            }
            block = next_block;
            if keys.len() == count {
                break;
            }
            count = keys.len();
        }

        let mut rep: HashMap<usize, usize> = HashMap::new();
        for &i in &live {
            rep.entry(block[&i]).or_insert(i);
        }
        let mut changed = false;
        for &i in &live {
            let r = rep[&block[&i]];
            if r != i {
                changed = true;
                if self.eqs[i].kind != VarKind::Branching && self.eqs[r].kind == VarKind::Branching {
                    self.eqs[r].kind = self.eqs[i].kind;
                }
            }
        }
        if !changed {
            return false;
        }
        let target = |v: usize| match block.get(&v) {
            Some(b) => rep[b],
            None => v,
        };
        for &i in &live {
            let r = rep[&block[&i]];
            if r != i {
                self.alive[i] = false;
                let name = self.eqs[i].var.clone();
                self.bindings.insert(name, Poly::var(r));
            }
        }
        for i in 0..self.eqs.len() {
            if self.alive[i] {
                self.eqs[i].rhs = self.eqs[i].rhs.map_vars(target);
            }
        }
        for p in self.bindings.values_mut() {
            *p = p.map_vars(target);
        }
        true
    }

    fn substitute_branching(&mut self) -> bool {
        let mut changed = false;
        for y in 0..self.eqs.len() {
            if !self.alive[y] || self.eqs[y].kind != VarKind::Branching || self.eqs[y].rhs.mentions(y) {
                continue;
            }
            let users: Vec<usize> = self.live().into_iter().filter(|&x| self.eqs[x].rhs.mentions(y)).collect();
            if !users.is_empty() && users.iter().all(|&x| self.eqs[x].priority == self.eqs[y].priority) {
                let value = self.eqs[y].rhs.clone();
                self.eliminate(y, value);
                changed = true;
            }
        }
        changed
    }
}

/// Folds sink components to constants, merges congruent variables of equal
/// priority, substitutes non-recursive branching rows whose dependents all
/// share their priority, and renames survivors `x1..xn` in dependency order.
///
/// Eliminated names stay resolvable through [`FixpointSystem::resolve`].
pub fn simplify(sys: &FixpointSystem) -> FixpointSystem {
    let mut w = Work {
        eqs: sys.equations().to_vec(),
        alive: vec![true; sys.len()],
        bindings: sys.bindings().clone(),
    };
    loop {
        let folded = w.fold_constants();
        let merged = w.merge_congruent();
        let substituted = w.substitute_branching();
        if !(folded || merged || substituted) {
            break;
        }
    }

    let live = w.live();
    let position: HashMap<usize, usize> = live.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let deps: Vec<Vec<usize>> =
        live.iter().map(|&i| w.eqs[i].rhs.vars().iter().map(|v| position[v]).collect()).collect();
    let order: Vec<usize> = ordered_sccs(&deps).into_iter().flatten().map(|k| live[k]).collect();
    let renumber: HashMap<usize, usize> = order.iter().enumerate().map(|(n, &i)| (i, n)).collect();

    let mut bindings: IndexMap<String, Poly> =
        w.bindings.iter().map(|(k, p)| (k.clone(), p.map_vars(|v| renumber[&v]))).collect();
    let mut equations = Vec::with_capacity(order.len());
    for (n, &i) in order.iter().enumerate() {
        let e = &w.eqs[i];
        let name = format!("x{}", n + 1);
        if e.var != name {
            bindings.insert(e.var.clone(), Poly::var(n));
        }
        bindings.shift_remove(&name);
        equations.push(Equation {
            var: name,
            rhs: e.rhs.map_vars(|v| renumber[&v]),
            quantifier: e.quantifier,
            priority: e.priority,
            kind: e.kind,
        });
    }
    FixpointSystem::with_bindings(equations, bindings).expect("simplification keeps indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{builtin, normalize_distinct_children, Builtin};
    use crate::fixpoint::{build_system, parse_system, Resolved};
    use crate::mbp::build_mbp;
    use crate::poly::rat;

    fn simplified(b: Builtin) -> FixpointSystem {
        let a = normalize_distinct_children(&builtin(&b).unwrap());
        simplify(&build_system(&build_mbp(&a).unwrap()))
    }

    #[test]
    fn l1_reduces_to_one_equation() {
        let s = simplified(Builtin::L(1));
        assert_eq!(s.lines(), vec!["x1 ≛μ 1/3 + 2/3 x1^2"]);
        assert_eq!(s.resolve("s(q1)"), Some(Resolved::Var(0)));
        assert_eq!(s.resolve("s(top)"), Some(Resolved::Const(rat(1, 1))));
        assert_eq!(s.value_of("s(q1,b)", &[rat(1, 2)]), Some(rat(1, 4)));
        assert_eq!(s.value_of("s(q1,a)", &[rat(1, 2)]), Some(rat(1, 1)));
    }

    #[test]
    fn l3_chain() {
        let s = simplified(Builtin::L(3));
        assert_eq!(
            s.lines(),
            vec!["x1 ≛μ 1/3 + 2/3 x1^2", "x2 ≛μ 1/3 x1^2 + 2/3 x2^2", "x3 ≛μ 1/3 x2^2 + 2/3 x3^2"]
        );
        assert_eq!(s.resolve("s(q3)"), Some(Resolved::Var(2)));
    }

    #[test]
    fn linf_pair() {
        let s = simplified(Builtin::Linf);
        assert_eq!(s.lines(), vec!["x1 ≛μ 1/3 x2^2 + 2/3 x1^2", "x2 ≛ν 1/3 x2^2 + 2/3 x1^2"]);
    }

    #[test]
    fn w13_is_linear() {
        let s = simplified(Builtin::W(1, 3));
        assert_eq!(
            s.lines(),
            vec![
                "x1 ≛μ 1/3 x1 + 1/3 x2 + 1/3 x3",
                "x2 ≛ν 1/3 x1 + 1/3 x2 + 1/3 x3",
                "x3 ≛μ 1/3 x1 + 1/3 x2 + 1/3 x3",
            ]
        );
    }

    #[test]
    fn idempotent() {
        for b in [Builtin::L(2), Builtin::Linf, Builtin::W(0, 2)] {
            let s = simplified(b);
            assert_eq!(simplify(&s), s);
        }
    }

    #[test]
    fn sink_only_system_folds_to_one() {
        let s = parse_system("x ≛ν x x").unwrap();
        let t = simplify(&s);
        assert!(t.is_empty());
        assert_eq!(t.resolve("x"), Some(Resolved::Const(rat(1, 1))));
        let s = parse_system("x ≛μ x^2").unwrap();
        assert_eq!(simplify(&s).resolve("x"), Some(Resolved::Const(rat(0, 1))));
    }

    #[test]
    fn hand_authored_rows_are_not_substituted() {
        let s = parse_system("x ≛μ 1/2 y + 1/4\ny ≛μ x").unwrap();
        assert_eq!(simplify(&s).len(), 2);
    }
}
