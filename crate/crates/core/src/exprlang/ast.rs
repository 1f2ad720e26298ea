use std::fmt;

use super::{EvalError, ExtReal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    U,
    P,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::U => "u",
            Var::P => "p",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    /// Natural logarithm, kept distinct from `ln` only for printing.
    Log,
    Abs,
    Cosh,
    Sqrt,
    Min,
    Max,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Log => "log",
            Func::Abs => "abs",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "log" => Func::Log,
            "abs" => Func::Abs,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }

    /// Whether `n` arguments is a valid call.
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Func::Min | Func::Max => n >= 2,
            _ => n == 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl CmpOp {
    fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
        }
    }

    fn holds(self, a: ExtReal, b: ExtReal) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(ExtReal),
    Var(Var),
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call {
        func: Func,
        args: Vec<Expr>,
    },
    /// First branch whose condition holds; `otherwise` when none does.
    Piecewise {
        branches: Vec<(Condition, Expr)>,
        otherwise: Box<Expr>,
    },
}

/// Variable bindings for [`Expr::eval`]. `p` may be unbound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Env {
    pub t: ExtReal,
    pub u: ExtReal,
    pub p: Option<ExtReal>,
}

impl Env {
    pub fn new(t: f64, u: f64, p: Option<f64>) -> Self {
        Env {
            t: ExtReal::from(t),
            u: ExtReal::from(u),
            p: p.map(ExtReal::from),
        }
    }

    fn get(&self, var: Var) -> Result<ExtReal, EvalError> {
        match var {
            Var::T => Ok(self.t),
            Var::U => Ok(self.u),
            Var::P => self.p.ok_or(EvalError::Unbound(Var::P)),
        }
    }
}

impl Expr {
    pub fn num(x: f64) -> Expr {
        Expr::Const(ExtReal::from(x))
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        }
    }

    pub fn call(func: Func, args: Vec<Expr>) -> Expr {
        Expr::Call { func, args }
    }

    /// Whether `var` occurs anywhere in the tree.
    pub fn mentions(&self, var: Var) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Neg(e) => e.mentions(var),
            Expr::Binary { lhs, rhs, .. } => lhs.mentions(var) || rhs.mentions(var),
            Expr::Call { args, .. } => args.iter().any(|a| a.mentions(var)),
            Expr::Piecewise {
                branches,
                otherwise,
            } => {
                otherwise.mentions(var)
                    || branches.iter().any(|(c, e)| {
                        c.lhs.mentions(var) || c.rhs.mentions(var) || e.mentions(var)
                    })
            }
        }
    }

    /// Evaluates over the extended reals.
    ///
    /// `exp(x) - 1`, `cosh(x) - 1` and `ln(x + 1)` / `log(1 + x)` are
    /// recognised and evaluated with their cancellation-free forms. Only the
    /// selected piecewise branch is evaluated.
    pub fn eval(&self, env: &Env) -> Result<ExtReal, EvalError> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var(v) => env.get(*v),
            Expr::Neg(e) => e.eval(env)?.neg(),
            Expr::Binary { op, lhs, rhs } => {
                if *op == BinOp::Sub && is_one(rhs) {
                    if let Expr::Call { func, args } = lhs.as_ref() {
                        match func {
                            _ if args.len() != 1 => {}
                            Func::Exp => return args[0].eval(env)?.exp_m1(),
                            Func::Cosh => return args[0].eval(env)?.cosh_m1(),
                            _ => {}
                        }
                    }
                }
                let a = lhs.eval(env)?;
                let b = rhs.eval(env)?;
                match op {
                    BinOp::Add => a.add(b),
                    BinOp::Sub => a.sub(b),
                    BinOp::Mul => a.mul(b),
                    BinOp::Div => a.div(b),
                    BinOp::Pow => a.pow(b),
                }
            }
            Expr::Call { func, args } if !func.accepts(args.len()) => {
                Err(EvalError::Arity(func.name()))
            }
            Expr::Call { func, args } => match func {
                Func::Ln | Func::Log => {
                    if let Some(x) = plus_one_operand(&args[0]) {
                        return x.eval(env)?.ln_1p();
                    }
                    args[0].eval(env)?.ln()
                }
                Func::Exp => args[0].eval(env)?.exp(),
                Func::Abs => Ok(args[0].eval(env)?.abs()),
                Func::Cosh => args[0].eval(env)?.cosh(),
                Func::Sqrt => args[0].eval(env)?.sqrt(),
                Func::Min | Func::Max => {
                    let mut acc = args[0].eval(env)?;
                    for a in &args[1..] {
                        let x = a.eval(env)?;
                        acc = if *func == Func::Min {
                            acc.min(x)
                        } else {
                            acc.max(x)
                        };
                    }
                    Ok(acc)
                }
            },
            Expr::Piecewise {
                branches,
                otherwise,
            } => {
                for (cond, value) in branches {
                    let a = cond.lhs.eval(env)?;
                    let b = cond.rhs.eval(env)?;
                    if cond.op.holds(a, b) {
                        return value.eval(env);
                    }
                }
                otherwise.eval(env)
            }
        }
    }
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Const(ExtReal::Finite(x)) if *x == 1.0)
}

/// `x` when `e` is `x + 1` or `1 + x`.
fn plus_one_operand(e: &Expr) -> Option<&Expr> {
    match e {
        Expr::Binary {
            op: BinOp::Add,
            lhs,
            rhs,
        } => {
            if is_one(rhs) {
                Some(lhs)
            } else if is_one(lhs) {
                Some(rhs)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Fully parenthesised; re-parses to a structurally equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(ExtReal::PosInf) => f.write_str("inf"),
            Expr::Const(ExtReal::Finite(x)) => {
                if x.is_sign_negative() {
                    write!(f, "({x:?})")
                } else {
                    write!(f, "{x:?}")
                }
            }
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Call { func, args } => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Piecewise {
                branches,
                otherwise,
            } => {
                f.write_str("piecewise(")?;
                for (cond, value) in branches {
                    write!(f, "{} {} {}, {value}, ", cond.lhs, cond.op.symbol(), cond.rhs)?;
                }
                write!(f, "{otherwise})")
            }
        }
    }
}
