//! Time-independent value graphs: numbers, variables, and scalar operators.
//!
//! Scalars are immutable and cheap to clone (nodes are shared behind `Arc`).
//! Arithmetic on scalars builds new operator nodes without evaluating
//! anything; evaluation happens in [`crate::eval`] once all variables are
//! bound.

use std::sync::Arc;

use super::kind::Kind;
use super::GraphError;

/// The scalar operator set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarOp {
    Sum,
    Product,
    Sub,
    Div,
    Neg,
    Min,
    Max,
}

impl ScalarOp {
    pub fn kind(self) -> Kind {
        match self {
            ScalarOp::Sum => Kind::ScalarSum,
            ScalarOp::Product => Kind::ScalarProduct,
            ScalarOp::Sub => Kind::ScalarSub,
            ScalarOp::Div => Kind::ScalarDiv,
            ScalarOp::Neg => Kind::ScalarNeg,
            ScalarOp::Min => Kind::ScalarMin,
            ScalarOp::Max => Kind::ScalarMax,
        }
    }

    /// Fixed arity, or `None` for the variadic operators (which take one or
    /// more items).
    pub fn arity(self) -> Option<usize> {
        match self {
            ScalarOp::Sub | ScalarOp::Div => Some(2),
            ScalarOp::Neg => Some(1),
            ScalarOp::Sum | ScalarOp::Product | ScalarOp::Min | ScalarOp::Max => None,
        }
    }
}

#[derive(Debug)]
pub(crate) enum ScalarRepr {
    Num {
        value: f64,
        /// Key of the variable this number was substituted from, if any.
        /// Invisible to structural equality; used by the unbind pass.
        origin: Option<String>,
    },
    Var {
        key: String,
    },
    Op {
        op: ScalarOp,
        items: Vec<Scalar>,
    },
}

/// An immutable scalar node: a number, a variable, or an operator over
/// scalar items.
#[derive(Clone)]
pub struct Scalar {
    pub(crate) repr: Arc<ScalarRepr>,
}

/// Borrowed view of a scalar node, for exhaustive matching.
#[derive(Debug, Clone, Copy)]
pub enum ScalarView<'a> {
    Num { value: f64 },
    Var { key: &'a str },
    Op { op: ScalarOp, items: &'a [Scalar] },
}

impl Scalar {
    fn from_repr(repr: ScalarRepr) -> Self {
        Scalar {
            repr: Arc::new(repr),
        }
    }

    /// A number leaf. Unitless by itself; the unit is given by the edge it
    /// hangs from.
    pub fn num(value: f64) -> Self {
        Scalar::from_repr(ScalarRepr::Num {
            value,
            origin: None,
        })
    }

    /// A number that remembers the variable key it was substituted from.
    pub(crate) fn num_with_origin(value: f64, key: &str) -> Self {
        Scalar::from_repr(ScalarRepr::Num {
            value,
            origin: Some(key.to_owned()),
        })
    }

    /// A variable leaf. Binding happens by rewrite (see
    /// [`crate::passes::substitute`]), never by mutation.
    pub fn var(key: impl Into<String>) -> Self {
        Scalar::from_repr(ScalarRepr::Var { key: key.into() })
    }

    /// Generic operator constructor; checks arity.
    pub fn op(op: ScalarOp, items: Vec<Scalar>) -> Result<Self, GraphError> {
        match op.arity() {
            Some(n) if items.len() != n => Err(GraphError::Arity {
                kind: op.kind(),
                expected: n,
                got: items.len(),
            }),
            None if items.is_empty() => Err(GraphError::EmptyOperands { kind: op.kind() }),
            _ => Ok(Scalar::from_repr(ScalarRepr::Op { op, items })),
        }
    }

    pub fn sum_of(
        items: impl IntoIterator<Item = impl Into<Scalar>>,
    ) -> Result<Self, GraphError> {
        Scalar::op(ScalarOp::Sum, items.into_iter().map(Into::into).collect())
    }

    pub fn product_of(
        items: impl IntoIterator<Item = impl Into<Scalar>>,
    ) -> Result<Self, GraphError> {
        Scalar::op(
            ScalarOp::Product,
            items.into_iter().map(Into::into).collect(),
        )
    }

    pub fn min_of(
        items: impl IntoIterator<Item = impl Into<Scalar>>,
    ) -> Result<Self, GraphError> {
        Scalar::op(ScalarOp::Min, items.into_iter().map(Into::into).collect())
    }

    pub fn max_of(
        items: impl IntoIterator<Item = impl Into<Scalar>>,
    ) -> Result<Self, GraphError> {
        Scalar::op(ScalarOp::Max, items.into_iter().map(Into::into).collect())
    }

    /// Binary minimum.
    pub fn min(a: impl Into<Scalar>, b: impl Into<Scalar>) -> Self {
        Scalar::op(ScalarOp::Min, vec![a.into(), b.into()]).expect("binary min")
    }

    /// Binary maximum.
    pub fn max(a: impl Into<Scalar>, b: impl Into<Scalar>) -> Self {
        Scalar::op(ScalarOp::Max, vec![a.into(), b.into()]).expect("binary max")
    }

    pub fn kind(&self) -> Kind {
        match &*self.repr {
            ScalarRepr::Num { .. } => Kind::Num,
            ScalarRepr::Var { .. } => Kind::Var,
            ScalarRepr::Op { op, .. } => op.kind(),
        }
    }

    pub fn view(&self) -> ScalarView<'_> {
        match &*self.repr {
            ScalarRepr::Num { value, .. } => ScalarView::Num { value: *value },
            ScalarRepr::Var { key } => ScalarView::Var { key },
            ScalarRepr::Op { op, items } => ScalarView::Op {
                op: *op,
                items,
            },
        }
    }

    pub fn as_num(&self) -> Option<f64> {
        match &*self.repr {
            ScalarRepr::Num { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match &*self.repr {
            ScalarRepr::Var { key } => Some(key),
            _ => None,
        }
    }

    /// The variable key a substituted number originated from, if recorded.
    pub fn origin_key(&self) -> Option<&str> {
        match &*self.repr {
            ScalarRepr::Num { origin, .. } => origin.as_deref(),
            _ => None,
        }
    }

    /// True when both handles point at the same constructed node instance.
    pub fn ptr_eq(&self, other: &Scalar) -> bool {
        Arc::ptr_eq(&self.repr, &other.repr)
    }

    pub(crate) fn ptr_key(&self) -> usize {
        Arc::as_ptr(&self.repr) as usize
    }
}

/// Structural equality: kinds, payloads, and children must match recursively.
/// Substitution origins are bookkeeping, not structure, and do not participate.
impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        match (&*self.repr, &*other.repr) {
            (ScalarRepr::Num { value: a, .. }, ScalarRepr::Num { value: b, .. }) => a == b,
            (ScalarRepr::Var { key: a }, ScalarRepr::Var { key: b }) => a == b,
            (
                ScalarRepr::Op { op: a, items: ia },
                ScalarRepr::Op { op: b, items: ib },
            ) => a == b && ia == ib,
            _ => false,
        }
    }
}

impl std::fmt::Debug for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &*self.repr {
            ScalarRepr::Num { value, origin: None } => write!(f, "Num({value})"),
            ScalarRepr::Num {
                value,
                origin: Some(key),
            } => write!(f, "Num({value}; from {key:?})"),
            ScalarRepr::Var { key } => write!(f, "Var({key:?})"),
            ScalarRepr::Op { op, items } => {
                write!(f, "{:?}(", op)?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{item:?}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl From<f64> for Scalar {
    fn from(value: f64) -> Self {
        Scalar::num(value)
    }
}

impl From<i32> for Scalar {
    fn from(value: i32) -> Self {
        Scalar::num(value as f64)
    }
}

impl From<&Scalar> for Scalar {
    fn from(value: &Scalar) -> Self {
        value.clone()
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:expr) => {
        impl std::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar::op($op, vec![self, rhs]).expect("binary scalar operator")
            }
        }
        impl std::ops::$trait<f64> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: f64) -> Scalar {
                Scalar::op($op, vec![self, Scalar::num(rhs)]).expect("binary scalar operator")
            }
        }
        impl std::ops::$trait<Scalar> for f64 {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar::op($op, vec![Scalar::num(self), rhs]).expect("binary scalar operator")
            }
        }
        impl std::ops::$trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar::op($op, vec![self.clone(), rhs.clone()])
                    .expect("binary scalar operator")
            }
        }
    };
}

scalar_binop!(Add, add, ScalarOp::Sum);
scalar_binop!(Mul, mul, ScalarOp::Product);
scalar_binop!(Sub, sub, ScalarOp::Sub);
scalar_binop!(Div, div, ScalarOp::Div);

// In-place operators rebind the handle to a new operator node; the original
// node is immutable and survives wherever else it is shared.
impl<R> std::ops::AddAssign<R> for Scalar
where
    Scalar: std::ops::Add<R, Output = Scalar>,
{
    fn add_assign(&mut self, rhs: R) {
        *self = self.clone() + rhs;
    }
}

impl<R> std::ops::MulAssign<R> for Scalar
where
    Scalar: std::ops::Mul<R, Output = Scalar>,
{
    fn mul_assign(&mut self, rhs: R) {
        *self = self.clone() * rhs;
    }
}

impl<R> std::ops::SubAssign<R> for Scalar
where
    Scalar: std::ops::Sub<R, Output = Scalar>,
{
    fn sub_assign(&mut self, rhs: R) {
        *self = self.clone() - rhs;
    }
}

impl<R> std::ops::DivAssign<R> for Scalar
where
    Scalar: std::ops::Div<R, Output = Scalar>,
{
    fn div_assign(&mut self, rhs: R) {
        *self = self.clone() / rhs;
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::op(ScalarOp::Neg, vec![self]).expect("unary minus")
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::op(ScalarOp::Neg, vec![self.clone()]).expect("unary minus")
    }
}
