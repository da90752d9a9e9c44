//! Direct Tarskian evaluator used to cross-check [`super::check`]. It walks
//! the formula tree with a name environment, ranges every quantifier over
//! the whole universe and re-evaluates macro bodies on every call.

use super::formula::{Atom, Formula, Var};
use super::macros::MacroTable;
use super::structure::FiniteStructure;
use std::collections::HashMap;

pub fn eval(f: &Formula, table: &MacroTable, st: &FiniteStructure, env: &HashMap<Var, u32>) -> bool {
    let mut env = env.clone();
    go(f, table, st, &mut env)
}

fn go(f: &Formula, table: &MacroTable, st: &FiniteStructure, env: &mut HashMap<Var, u32>) -> bool {
    let val = |x: &Var| *env.get(x).unwrap_or_else(|| panic!("unbound variable {x}"));
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => match a {
            Atom::Eq(x, y) => val(x) == val(y),
            Atom::Edge(x, y) => st.edge(val(x), val(y)),
            Atom::Leq(x, y) => st.leq(val(x), val(y)),
            Atom::Add(x, y, z) => st.add(val(x), val(y), val(z)),
            Atom::Mul(x, y, z) => st.mul(val(x), val(y), val(z)),
        },
        Formula::Not(a) => !go(a, table, st, env),
        Formula::And(a, b) => go(a, table, st, env) && go(b, table, st, env),
        Formula::Or(a, b) => go(a, table, st, env) || go(b, table, st, env),
        Formula::Implies(a, b) => !go(a, table, st, env) || go(b, table, st, env),
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let saved = env.get(x).copied();
            let forall = matches!(f, Formula::Forall(..));
            let mut result = forall;
            for e in 0..st.size() as u32 {
                env.insert(x.clone(), e);
                if go(body, table, st, env) != forall {
                    result = !forall;
                    break;
                }
            }
            match saved {
                Some(v) => env.insert(x.clone(), v),
                None => env.remove(x),
            };
            result
        }
        Formula::Call(n, args) => {
            let m = table.get(n).unwrap_or_else(|| panic!("unknown macro {n}"));
            let mut inner: HashMap<Var, u32> = m.params.iter().cloned().zip(args.iter().map(val)).collect();
            go(&m.body, table, st, &mut inner)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::check::{Checker, Program};
    use crate::logic::formula::Signature;
    use crate::logic::syntax::tests::arb_formula;
    use proptest::prelude::*;
    use proptest::test_runner::{Config, TestRunner};

    fn arb_structure(sig: Signature) -> impl Strategy<Value = FiniteStructure> {
        (1usize..=6).prop_flat_map(move |n| {
            prop::collection::vec((0..n, 0..n), 0..10).prop_map(move |pairs| {
                let names: Vec<String> = (0..n).map(|i| format!("e{i}")).collect();
                match sig {
                    Signature::Graph => {
                        let edges: Vec<_> = pairs.into_iter().filter(|(a, b)| a != b).collect();
                        FiniteStructure::graph(names, &edges).unwrap()
                    }
                    _ => {
                        let leq: Vec<_> = pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
                        FiniteStructure::poset(names, &leq).unwrap()
                    }
                }
            })
        })
    }

    fn table(sig: Signature) -> MacroTable {
        let mut t = MacroTable::new(sig);
        let atom = if sig == Signature::Graph { "E(x, z)" } else { "x <= z" };
        t.define_text("M", &["x", "y"], &format!("exists z. {atom} & (z = y | forall x. x = z -> y != x)")).unwrap();
        t
    }

    fn restrict(f: &Formula, sig: Signature) -> Formula {
        match f {
            Formula::Atom(Atom::Edge(a, b)) if sig != Signature::Graph => Formula::leq(a, b),
            Formula::Atom(Atom::Leq(a, b)) if sig != Signature::Poset => Formula::edge(a, b),
            Formula::Atom(Atom::Add(a, b, _)) => Formula::eq(a, b),
            Formula::Not(a) => Formula::not(restrict(a, sig)),
            Formula::And(a, b) => Formula::and(restrict(a, sig), restrict(b, sig)),
            Formula::Or(a, b) => Formula::or(restrict(a, sig), restrict(b, sig)),
            Formula::Implies(a, b) => Formula::implies(restrict(a, sig), restrict(b, sig)),
            Formula::Forall(x, a) => Formula::forall(x, restrict(a, sig)),
            Formula::Exists(x, a) => Formula::exists(x, restrict(a, sig)),
            _ => f.clone(),
        }
    }

    #[test]
    fn compiled_checker_agrees_with_naive_evaluator() {
        for sig in [Signature::Graph, Signature::Poset] {
            let tab = table(sig);
            let prog = Program::new(&tab).unwrap();
            let mut runner = TestRunner::new(Config { cases: 100, ..Config::default() });
            runner
                .run(&(arb_formula(&["x", "y", "z"]), arb_structure(sig)), |(f, st)| {
                    let f = restrict(&f, sig);
                    let q = prog.query(&f, &["x", "y", "z"]).unwrap();
                    let mut c = Checker::new(&st, &prog).unwrap();
                    let n = st.size() as u32;
                    for a in 0..n {
                        for b in 0..n {
                            for d in 0..n {
                                let env: HashMap<Var, u32> = [("x".into(), a), ("y".into(), b), ("z".into(), d)].into();
                                prop_assert_eq!(c.eval(&q, &[a, b, d]), eval(&f, &tab, &st, &env), "{}", f);
                            }
                        }
                    }
                    Ok(())
                })
                .unwrap();
        }
    }
}
