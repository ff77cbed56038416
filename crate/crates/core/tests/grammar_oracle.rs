//! Independent oracles for the prefix languages: every well-formed string is
//! generated from the grammar rules and evaluated over an explicit tree.

use std::collections::HashSet;

use countra_core::enumerate::{for_each_word, DEFAULT_MAX_WORDS};
use countra_core::languages::{
    bool_eval, lm_crosscheck, lm_decide, lm_decide_guarded, lm_machine, lm_machine_guarded,
    lm_parse, prefix_function, BoolExpr, BoolOp, GrammarLm, PrefixFunction,
};

/// All expressions with at most `max_len` tokens, by expanding `<exp> -> t <exp>^arity(t)`.
fn generate(g: &GrammarLm, max_len: usize) -> HashSet<Vec<usize>> {
    // sequences of `need` consecutive expressions with total length <= budget
    fn seqs(g: &GrammarLm, need: usize, budget: usize) -> Vec<Vec<usize>> {
        if need == 0 {
            return vec![vec![]];
        }
        if budget < need {
            return vec![];
        }
        let mut out = Vec::new();
        for head in 0..g.alphabet().len() {
            let a = g.arity(head);
            for rest in seqs(g, a + need - 1, budget - 1) {
                let mut w = vec![head];
                w.extend(rest);
                out.push(w);
            }
        }
        out
    }
    seqs(g, 1, max_len).into_iter().collect()
}

#[test]
fn generated_language_matches_parser_and_guarded_deciders() {
    for g in [
        GrammarLm::unary(),
        GrammarLm::booleans(),
        GrammarLm::ternary(),
    ] {
        let max_len = 8;
        let language = generate(&g, max_len);
        assert!(!language.is_empty());
        let verbatim_only = std::cell::RefCell::new(Vec::new());
        let guarded = lm_machine_guarded(&g);
        let plain = lm_machine(&g);
        for_each_word(g.alphabet().len(), max_len, |w| {
            let member = language.contains(w);
            assert_eq!(lm_parse(&g, w).unwrap(), member);
            assert_eq!(lm_decide_guarded(&g, w).unwrap(), member);
            assert_eq!(guarded.accepts(w).unwrap(), member);
            let verbatim = lm_decide(&g, w).unwrap();
            assert_eq!(plain.accepts(w).unwrap(), verbatim);
            // the bare counting rule is complete but not sound
            assert!(verbatim || !member);
            if verbatim && !member {
                verbatim_only.borrow_mut().push(w.to_vec());
            }
        });
        let extra = verbatim_only.into_inner();
        assert!(!extra.is_empty(), "max arity {}", g.max_arity());
        // `0 ¬` under L_1 is the shortest: a value followed by an operator
        assert!(extra.iter().all(|w| w.len() >= 2));
    }
}

#[test]
fn shortest_verbatim_counterexample_for_booleans() {
    let g = GrammarLm::booleans();
    let report = lm_crosscheck(&g, 5, DEFAULT_MAX_WORDS).unwrap();
    let first = &report.verbatim_vs_parser.counterexamples[0];
    assert!(first.left && !first.right);
    let tokens: Vec<String> = first.word.chars().map(String::from).collect();
    assert_eq!(tokens.len(), 3);
    assert_eq!(g.arity(g.alphabet().index_of(&tokens[2]).unwrap()), 2);
    assert!(report.guarded_vs_parser.agrees());
    assert!(report.machine_vs_verbatim.agrees());
    assert!(report.guarded_machine_vs_parser.agrees());
}

#[derive(Debug)]
enum Tree {
    Leaf(bool),
    Node(BoolOp, Box<Tree>, Box<Tree>),
}

impl Tree {
    fn eval(&self) -> bool {
        match self {
            Tree::Leaf(v) => *v,
            Tree::Node(BoolOp::And, l, r) => l.eval() && r.eval(),
            Tree::Node(BoolOp::Or, l, r) => l.eval() || r.eval(),
        }
    }

    fn tokens(&self, out: &mut Vec<&'static str>) {
        match self {
            Tree::Leaf(v) => out.push(if *v { "1" } else { "0" }),
            Tree::Node(op, l, r) => {
                out.push(op.token());
                l.tokens(out);
                r.tokens(out);
            }
        }
    }
}

/// All boolean expression trees with exactly `leaves` leaves.
fn trees(leaves: usize) -> Vec<Tree> {
    if leaves == 1 {
        return vec![Tree::Leaf(false), Tree::Leaf(true)];
    }
    let mut out = Vec::new();
    for left in 1..leaves {
        for op in [BoolOp::And, BoolOp::Or] {
            for l in trees(left) {
                for r in trees(leaves - left) {
                    out.push(Tree::Node(op, Box::new(clone(&l)), Box::new(r)));
                }
            }
        }
    }
    out
}

fn clone(t: &Tree) -> Tree {
    match t {
        Tree::Leaf(v) => Tree::Leaf(*v),
        Tree::Node(op, l, r) => Tree::Node(*op, Box::new(clone(l)), Box::new(clone(r))),
    }
}

#[test]
fn bool_eval_matches_tree_evaluation_up_to_length_11() {
    let mut checked = 0;
    for leaves in 1..=6 {
        for t in trees(leaves) {
            let mut tokens = Vec::new();
            t.tokens(&mut tokens);
            assert!(tokens.len() <= 11);
            let expr = BoolExpr::parse(tokens.iter().copied()).unwrap();
            assert_eq!(bool_eval(&expr).unwrap(), t.eval(), "{expr}");
            checked += 1;
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn homogeneous_prefixes_are_n_ary_and_or() {
    for p in 0..=8 {
        let and = prefix_function(&vec![BoolOp::And; p]);
        let or = prefix_function(&vec![BoolOp::Or; p]);
        assert_eq!(
            and,
            PrefixFunction::from_fn(p + 1, |x| x.iter().all(|&b| b))
        );
        assert_eq!(or, PrefixFunction::from_fn(p + 1, |x| x.iter().any(|&b| b)));
    }
}
