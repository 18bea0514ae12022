use super::{NashExpr, Node};
use crate::rng::SplitMix64;
use crate::Q;

/// Random expression of bounded depth that is defined on all of `R^arity`:
/// square roots and denominators are kept positive by construction.
pub fn random_expr(rng: &mut SplitMix64, arity: usize, depth: u32) -> NashExpr {
    let node = random_node(rng, arity, depth);
    NashExpr::from_node(arity, super::DomainBox::unbounded(arity), node)
}

fn leaf(rng: &mut SplitMix64, arity: usize) -> Node {
    if rng.below(3) == 0 {
        let n = rng.below(9) as i64 - 4;
        let d = rng.below(4) as i64 + 1;
        Node::constant(Q::new(n.into(), d.into()))
    } else {
        Node::Var(rng.below(arity))
    }
}

fn one_plus_square(n: Node) -> Node {
    Node::add(Node::constant(Q::from_integer(1.into())), Node::mul(n.clone(), n))
}

fn random_node(rng: &mut SplitMix64, arity: usize, depth: u32) -> Node {
    if depth == 0 || rng.below(4) == 0 {
        return leaf(rng, arity);
    }
    let a = random_node(rng, arity, depth - 1);
    match rng.below(5) {
        0 => Node::add(a, random_node(rng, arity, depth - 1)),
        1 => Node::sub(a, random_node(rng, arity, depth - 1)),
        2 => Node::mul(a, random_node(rng, arity, depth - 1)),
        3 => Node::div(a, one_plus_square(random_node(rng, arity, depth - 1))),
        _ => Node::sqrt(one_plus_square(a)),
    }
}
