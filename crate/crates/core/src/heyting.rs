//! Heyting algebra interface shared by sieves, clopen subobjects and global
//! elements of the subobject classifier.

/// A bounded lattice with relative pseudo-complement.
///
/// Implementors are lightweight views (a poset plus, for sieves, a base
/// context); the elements themselves are plain values.
pub trait HeytingAlgebra {
    type Elem: Clone + PartialEq;

    fn top(&self) -> Self::Elem;
    fn bottom(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn implies(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.implies(a, &self.bottom())
    }

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.meet(a, b) == *a
    }
}

/// Operation selector for the stringly-dispatched entry points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeytingOp {
    Meet,
    Join,
    Implies,
    Not,
}

impl HeytingOp {
    pub fn apply<H: HeytingAlgebra>(self, algebra: &H, a: &H::Elem, b: &H::Elem) -> H::Elem {
        match self {
            HeytingOp::Meet => algebra.meet(a, b),
            HeytingOp::Join => algebra.join(a, b),
            HeytingOp::Implies => algebra.implies(a, b),
            HeytingOp::Not => algebra.neg(a),
        }
    }
}
