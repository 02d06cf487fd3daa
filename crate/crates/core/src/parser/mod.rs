//! Recursive-descent parser for `.act` files.
//!
//! Lists (preconditions, cases, creates, updates, postconditions, invariants)
//! are written by juxtaposition: an item ends where the next token cannot
//! continue it. Negative literals must therefore be parenthesized when they
//! start a list item, which the pretty printer always does.

pub mod lexer;

use num_bigint::BigInt;

use crate::diagnostic::Diagnostic;
use crate::span::Span;
use crate::syntax::*;
use lexer::{Keyword as K, Sym, Token, TokenKind as T};

pub use lexer::tokenize;

/// Parses a whole specification.
pub fn parse_spec(src: &str) -> Result<Spec, Vec<Diagnostic>> {
    let tokens = tokenize(src).map_err(|d| vec![d])?;
    parse_tokens(tokens)
}

/// Parses a token stream produced by [`tokenize`].
pub fn parse_tokens(tokens: Vec<Token>) -> Result<Spec, Vec<Diagnostic>> {
    let mut p = Parser::new(tokens);
    let mut contracts = Vec::new();
    let mut errors = Vec::new();
    while !p.at_eof() {
        if !p.is_kw(K::Contract) {
            errors.push(p.unexpected("`contract`"));
            p.skip_to_contract();
            continue;
        }
        match p.contract() {
            Ok(c) => contracts.push(c),
            Err(d) => {
                errors.push(d);
                p.pos += 1;
                p.skip_to_contract();
            }
        }
    }
    if errors.is_empty() {
        Ok(Spec { contracts })
    } else {
        Err(errors)
    }
}

/// Parses a standalone expression.
pub fn parse_expr(src: &str) -> Result<Expr, Diagnostic> {
    let mut p = Parser::new(tokenize(src)?);
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses a standalone slot expression.
pub fn parse_slot_expr(src: &str) -> Result<SlotExpr, Diagnostic> {
    let mut p = Parser::new(tokenize(src)?);
    let e = p.slot_expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses a standalone slot type such as `mapping(address => uint256)`.
pub fn parse_slot_type(src: &str) -> Result<SlotType, Diagnostic> {
    let mut p = Parser::new(tokenize(src)?);
    let t = p.slot_type()?;
    p.expect_eof()?;
    Ok(t)
}

type PResult<X> = Result<X, Diagnostic>;

enum Postfix {
    Expr(Expr),
    Upd(MappingExpr),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Parser {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &T {
        &self.toks[self.pos].kind
    }

    fn peek_at(&self, n: usize) -> &T {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].kind
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    /// Span from `start` to the end of the last consumed token.
    fn since(&self, start: Span) -> Span {
        let end = if self.pos == 0 {
            start.end
        } else {
            self.toks[self.pos - 1].span.end
        };
        Span {
            end: end.max(start.start),
            ..start
        }
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek(), T::Eof)
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_kw(&self, k: K) -> bool {
        matches!(self.peek(), T::Keyword(x) if *x == k)
    }

    fn is_sym(&self, s: Sym) -> bool {
        matches!(self.peek(), T::Sym(x) if *x == s)
    }

    fn eat_kw(&mut self, k: K) -> bool {
        if self.is_kw(k) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn eat_sym(&mut self, s: Sym) -> bool {
        if self.is_sym(s) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        Diagnostic::error(
            self.span(),
            format!("expected {}, found {}", wanted, self.peek()),
        )
    }

    fn expect_kw(&mut self, k: K) -> PResult<()> {
        if self.eat_kw(k) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{}`", k.as_str())))
        }
    }

    fn expect_sym(&mut self, s: Sym) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{}`", s.as_str())))
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            T::Ident(s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn cap_ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            T::CapIdent(s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected("a contract name")),
        }
    }

    fn skip_to_contract(&mut self) {
        while !self.at_eof() && !self.is_kw(K::Contract) {
            self.advance();
        }
    }

    // ---- declarations ----

    fn contract(&mut self) -> PResult<Contract> {
        let start = self.span();
        self.expect_kw(K::Contract)?;
        let name = self.cap_ident()?;
        self.expect_sym(Sym::LBrace)?;
        let ctor = self.constructor()?;
        let mut transitions = Vec::new();
        while self.is_kw(K::Transition) {
            transitions.push(self.transition()?);
        }
        let invariants = if self.eat_kw(K::Invariants) {
            self.expr_list()?
        } else {
            Vec::new()
        };
        self.expect_sym(Sym::RBrace)?;
        Ok(Contract {
            name,
            ctor,
            transitions,
            invariants,
            span: self.since(start),
        })
    }

    fn iface(&mut self) -> PResult<Vec<Param>> {
        self.expect_sym(Sym::LParen)?;
        let mut params = Vec::new();
        if !self.is_sym(Sym::RParen) {
            loop {
                let start = self.span();
                let name = self.ident()?;
                self.expect_sym(Sym::Colon)?;
                let ty = self.abi_type()?;
                params.push(Param {
                    name,
                    ty,
                    span: self.since(start),
                });
                if !self.eat_sym(Sym::Comma) {
                    break;
                }
            }
        }
        self.expect_sym(Sym::RParen)?;
        Ok(params)
    }

    fn constructor(&mut self) -> PResult<Constructor> {
        let start = self.span();
        self.expect_kw(K::Constructor)?;
        let iface = self.iface()?;
        let payable = self.eat_kw(K::Payable);
        let iff = self.opt_block(K::Iff)?;
        let mut cases = Vec::new();
        if self.is_kw(K::Case) {
            while self.is_kw(K::Case) {
                let cstart = self.span();
                self.advance();
                let cond = self.expr()?;
                self.expect_sym(Sym::Colon)?;
                let creates = self.creates_block()?;
                cases.push(CtorCase {
                    cond,
                    creates,
                    span: self.since(cstart),
                });
            }
        } else {
            let cstart = self.span();
            let creates = self.creates_block()?;
            cases.push(CtorCase {
                cond: Expr::tt().with_span(cstart),
                creates,
                span: self.since(cstart),
            });
        }
        let ensures = self.opt_block(K::Ensures)?;
        Ok(Constructor {
            iface,
            payable,
            iff,
            cases,
            ensures,
            span: self.since(start),
        })
    }

    fn creates_block(&mut self) -> PResult<Vec<Create>> {
        let mut creates = Vec::new();
        if !self.eat_kw(K::Creates) {
            return Ok(creates);
        }
        while self.starts_slot_type() {
            let start = self.span();
            let ty = self.slot_type()?;
            let name = self.ident()?;
            self.expect_sym(Sym::Assign)?;
            let rhs = self.slot_expr()?;
            creates.push(Create {
                ty,
                name,
                rhs,
                span: self.since(start),
            });
        }
        Ok(creates)
    }

    fn transition(&mut self) -> PResult<Transition> {
        let start = self.span();
        self.expect_kw(K::Transition)?;
        let name = self.ident()?;
        let iface = self.iface()?;
        let payable = self.eat_kw(K::Payable);
        let ret = if self.eat_sym(Sym::Colon) {
            Some(self.abi_type()?)
        } else {
            None
        };
        let iff = self.opt_block(K::Iff)?;
        let mut cases = Vec::new();
        if self.is_kw(K::Case) {
            while self.is_kw(K::Case) {
                let cstart = self.span();
                self.advance();
                let cond = self.expr()?;
                self.expect_sym(Sym::Colon)?;
                let (updates, returns) = self.updates_block()?;
                cases.push(TransCase {
                    cond,
                    updates,
                    returns,
                    span: self.since(cstart),
                });
            }
        } else {
            let cstart = self.span();
            let (updates, returns) = self.updates_block()?;
            cases.push(TransCase {
                cond: Expr::tt().with_span(cstart),
                updates,
                returns,
                span: self.since(cstart),
            });
        }
        let ensures = self.opt_block(K::Ensures)?;
        Ok(Transition {
            name,
            iface,
            payable,
            ret,
            iff,
            cases,
            ensures,
            span: self.since(start),
        })
    }

    fn updates_block(&mut self) -> PResult<(Vec<Update>, Option<Expr>)> {
        let mut updates = Vec::new();
        if self.eat_kw(K::Updates) {
            while self.starts_ref() {
                let start = self.span();
                let target = self.reference()?;
                self.expect_sym(Sym::Assign)?;
                let rhs = self.slot_expr()?;
                updates.push(Update {
                    target,
                    rhs,
                    span: self.since(start),
                });
            }
        }
        let returns = if self.eat_kw(K::Returns) {
            Some(self.expr()?)
        } else {
            None
        };
        Ok((updates, returns))
    }

    fn opt_block(&mut self, k: K) -> PResult<Vec<Expr>> {
        if self.eat_kw(k) {
            self.expr_list()
        } else {
            Ok(Vec::new())
        }
    }

    fn expr_list(&mut self) -> PResult<Vec<Expr>> {
        let mut es = Vec::new();
        while self.starts_expr() {
            es.push(self.expr()?);
        }
        Ok(es)
    }

    // ---- types ----

    fn starts_slot_type(&self) -> bool {
        matches!(
            self.peek(),
            T::IntType(_) | T::CapIdent(_) | T::Keyword(K::Bool | K::Address | K::Mapping)
        )
    }

    fn base_type(&mut self) -> PResult<BaseType> {
        match self.peek().clone() {
            T::IntType(t) => {
                self.advance();
                Ok(BaseType::Int(t))
            }
            T::Keyword(K::Bool) => {
                self.advance();
                Ok(BaseType::Bool)
            }
            T::Keyword(K::Address) => {
                self.advance();
                Ok(BaseType::Address)
            }
            _ => Err(self.unexpected("a base type")),
        }
    }

    fn abi_type(&mut self) -> PResult<AbiType> {
        if self.is_kw(K::Address) && matches!(self.peek_at(1), T::Sym(Sym::Lt)) {
            self.advance();
            self.advance();
            let c = self.cap_ident()?;
            self.expect_sym(Sym::Gt)?;
            return Ok(AbiType::ContractAddr(c));
        }
        Ok(AbiType::Base(self.base_type()?))
    }

    fn mapping_type(&mut self) -> PResult<MappingType> {
        if self.eat_kw(K::Mapping) {
            self.expect_sym(Sym::LParen)?;
            let k = self.base_type()?;
            self.expect_sym(Sym::Arrow)?;
            let v = self.mapping_type()?;
            self.expect_sym(Sym::RParen)?;
            Ok(MappingType::map(k, v))
        } else {
            Ok(MappingType::Base(self.base_type()?))
        }
    }

    fn slot_type(&mut self) -> PResult<SlotType> {
        match self.peek().clone() {
            T::CapIdent(c) => {
                self.advance();
                Ok(SlotType::Contract(c))
            }
            T::Keyword(K::Mapping) => Ok(SlotType::Mapping(self.mapping_type()?)),
            _ => Ok(SlotType::Abi(self.abi_type()?)),
        }
    }

    // ---- expressions ----

    fn starts_ref(&self) -> bool {
        matches!(
            self.peek(),
            T::Ident(_)
                | T::Sym(Sym::LParen)
                | T::Keyword(K::Pre | K::Post | K::Caller | K::Origin | K::Callvalue | K::This)
        )
    }

    fn starts_expr(&self) -> bool {
        self.starts_ref()
            || matches!(
                self.peek(),
                T::Int(_)
                    | T::Sym(Sym::Minus)
                    | T::Keyword(K::True | K::False | K::Not | K::If | K::InRange | K::Addr)
            )
    }

    /// Whether the current token would continue an expression as a binary operator.
    fn continues_expr(&self) -> bool {
        matches!(
            self.peek(),
            T::Sym(
                Sym::Plus
                    | Sym::Minus
                    | Sym::Star
                    | Sym::Lt
                    | Sym::Le
                    | Sym::Ge
                    | Sym::Gt
                    | Sym::EqEq
                    | Sym::Implies
            ) | T::Keyword(K::And | K::Or | K::Div | K::Mod | K::Exp)
        )
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.implies()
    }

    fn implies(&mut self) -> PResult<Expr> {
        let start = self.span();
        let l = self.or()?;
        if self.eat_sym(Sym::Implies) {
            let r = self.implies()?;
            return Ok(Expr::implies(l, r).with_span(self.since(start)));
        }
        Ok(l)
    }

    fn or(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut l = self.and()?;
        while self.eat_kw(K::Or) {
            let r = self.and()?;
            l = Expr::or(l, r).with_span(self.since(start));
        }
        Ok(l)
    }

    fn and(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut l = self.equality()?;
        while self.eat_kw(K::And) {
            let r = self.equality()?;
            l = Expr::and(l, r).with_span(self.since(start));
        }
        Ok(l)
    }

    fn equality(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut l = self.comparison()?;
        while self.eat_sym(Sym::EqEq) {
            let r = self.comparison()?;
            l = Expr::eq(l, r).with_span(self.since(start));
        }
        Ok(l)
    }

    fn cmp_op(&self) -> Option<CmpOp> {
        match self.peek() {
            T::Sym(Sym::Lt) => Some(CmpOp::Lt),
            T::Sym(Sym::Le) => Some(CmpOp::Le),
            T::Sym(Sym::Ge) => Some(CmpOp::Ge),
            T::Sym(Sym::Gt) => Some(CmpOp::Gt),
            _ => None,
        }
    }

    fn comparison(&mut self) -> PResult<Expr> {
        let start = self.span();
        let l = self.additive()?;
        if let Some(op) = self.cmp_op() {
            self.advance();
            let r = self.additive()?;
            if self.cmp_op().is_some() {
                return Err(Diagnostic::error(
                    self.span(),
                    "comparison operators do not chain; add parentheses",
                ));
            }
            return Ok(Expr::cmp(op, l, r).with_span(self.since(start)));
        }
        Ok(l)
    }

    fn additive(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut l = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                T::Sym(Sym::Plus) => IntOp::Add,
                T::Sym(Sym::Minus) => IntOp::Sub,
                _ => return Ok(l),
            };
            self.advance();
            let r = self.multiplicative()?;
            l = Expr::bin_i(op, l, r).with_span(self.since(start));
        }
    }

    fn multiplicative(&mut self) -> PResult<Expr> {
        let start = self.span();
        let mut l = self.power()?;
        loop {
            let op = match self.peek() {
                T::Sym(Sym::Star) => IntOp::Mul,
                T::Keyword(K::Div) => IntOp::Div,
                T::Keyword(K::Mod) => IntOp::Mod,
                _ => return Ok(l),
            };
            self.advance();
            let r = self.power()?;
            l = Expr::bin_i(op, l, r).with_span(self.since(start));
        }
    }

    fn power(&mut self) -> PResult<Expr> {
        let start = self.span();
        let l = self.unary()?;
        if self.eat_kw(K::Exp) {
            let r = self.power()?;
            return Ok(Expr::bin_i(IntOp::Exp, l, r).with_span(self.since(start)));
        }
        Ok(l)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let start = self.span();
        if self.eat_kw(K::Not) {
            let e = self.unary()?;
            return Ok(Expr::not(e).with_span(self.since(start)));
        }
        match self.postfix(false)? {
            Postfix::Expr(e) => Ok(e),
            Postfix::Upd(m) => Err(Diagnostic::error(
                m.span(),
                "a mapping update is not an expression",
            )),
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let start = self.span();
        let kind = match self.peek().clone() {
            T::Int(n) => {
                self.advance();
                ExprKind::Int(n)
            }
            T::Sym(Sym::Minus) => {
                self.advance();
                match self.peek().clone() {
                    T::Int(n) => {
                        self.advance();
                        ExprKind::Int(-n)
                    }
                    _ => {
                        return Err(Diagnostic::error(
                            start,
                            "unary minus applies only to integer literals",
                        ))
                    }
                }
            }
            T::Keyword(K::True) => {
                self.advance();
                ExprKind::Bool(true)
            }
            T::Keyword(K::False) => {
                self.advance();
                ExprKind::Bool(false)
            }
            T::Sym(Sym::LParen) => {
                self.advance();
                let e = self.expr()?;
                self.expect_sym(Sym::RParen)?;
                return Ok(e);
            }
            T::Keyword(K::If) => {
                self.advance();
                let c = self.expr()?;
                self.expect_kw(K::Then)?;
                let t = self.expr()?;
                self.expect_kw(K::Else)?;
                let f = self.expr()?;
                ExprKind::Ite(Box::new(c), Box::new(t), Box::new(f))
            }
            T::Keyword(K::InRange) => {
                self.advance();
                self.expect_sym(Sym::LParen)?;
                let t = match self.peek().clone() {
                    T::IntType(t) => {
                        self.advance();
                        t
                    }
                    _ => return Err(self.unexpected("an integer type")),
                };
                self.expect_sym(Sym::Comma)?;
                let e = self.expr()?;
                self.expect_sym(Sym::RParen)?;
                ExprKind::InRange(t, Box::new(e))
            }
            T::Keyword(K::Addr) => {
                self.advance();
                self.expect_sym(Sym::LParen)?;
                let e = self.expr()?;
                self.expect_sym(Sym::RParen)?;
                match e.kind {
                    ExprKind::Ref(r) => ExprKind::Addr(r),
                    _ => {
                        return Err(Diagnostic::error(
                            e.span,
                            "`addr` in an expression takes a reference",
                        ))
                    }
                }
            }
            T::Keyword(k @ (K::Pre | K::Post)) => {
                self.advance();
                self.expect_sym(Sym::LParen)?;
                let x = self.ident()?;
                self.expect_sym(Sym::RParen)?;
                let kind = if k == K::Pre {
                    RefKind::Pre(x)
                } else {
                    RefKind::Post(x)
                };
                ExprKind::Ref(Ref::new(kind, self.since(start)))
            }
            T::Keyword(k @ (K::Caller | K::Origin | K::Callvalue | K::This)) => {
                self.advance();
                let v = match k {
                    K::Caller => EnvVar::Caller,
                    K::Origin => EnvVar::Origin,
                    K::Callvalue => EnvVar::Callvalue,
                    _ => EnvVar::This,
                };
                ExprKind::Ref(Ref::new(RefKind::Env(v), self.since(start)))
            }
            T::Ident(x) => {
                self.advance();
                ExprKind::Ref(Ref::new(RefKind::Var(x), self.since(start)))
            }
            _ => return Err(self.unexpected("an expression")),
        };
        Ok(Expr::new(kind, self.since(start)))
    }

    /// A primary followed by reference suffixes `.x`, `[e]` and `as A`.
    /// With `allow_update`, a trailing `[k => v, ...]` or `[]` yields a
    /// mapping update instead of an index.
    fn postfix(&mut self, allow_update: bool) -> PResult<Postfix> {
        let start = self.span();
        let mut e = self.primary()?;
        loop {
            let continues = matches!(e.kind, ExprKind::Ref(_))
                && matches!(
                    self.peek(),
                    T::Sym(Sym::Dot | Sym::LBracket) | T::Keyword(K::As)
                );
            if !continues {
                return Ok(Postfix::Expr(e));
            }
            let r = match e.kind {
                ExprKind::Ref(r) => r,
                _ => unreachable!(),
            };
            let kind = match self.advance().kind {
                T::Sym(Sym::Dot) => RefKind::Field(Box::new(r), self.ident()?),
                T::Keyword(K::As) => RefKind::Coerce(Box::new(r), self.cap_ident()?),
                _ => {
                    if allow_update && self.eat_sym(Sym::RBracket) {
                        return Ok(Postfix::Upd(MappingExpr::Upd {
                            base: r,
                            pairs: Vec::new(),
                            annot: None,
                            span: self.since(start),
                        }));
                    }
                    let k = self.expr()?;
                    if allow_update && self.is_sym(Sym::Arrow) {
                        let pairs = self.pairs_after_key(k)?;
                        return Ok(Postfix::Upd(MappingExpr::Upd {
                            base: r,
                            pairs,
                            annot: None,
                            span: self.since(start),
                        }));
                    }
                    self.expect_sym(Sym::RBracket)?;
                    RefKind::Index(Box::new(r), Box::new(k))
                }
            };
            let span = self.since(start);
            e = Expr::new(ExprKind::Ref(Ref::new(kind, span)), span);
        }
    }

    fn reference(&mut self) -> PResult<Ref> {
        let e = self.unary()?;
        match e.kind {
            ExprKind::Ref(r) => Ok(r),
            _ => Err(Diagnostic::error(e.span, "expected a reference")),
        }
    }

    // ---- mapping and slot expressions ----

    /// Parses `=> v (, k => v)* ]` given the first key.
    fn pairs_after_key(&mut self, first: Expr) -> PResult<Pairs> {
        let mut pairs = Vec::new();
        let mut key = first;
        loop {
            self.expect_sym(Sym::Arrow)?;
            let v = self.mapping_expr()?;
            pairs.push((key, v));
            if self.eat_sym(Sym::Comma) {
                key = self.expr()?;
            } else {
                break;
            }
        }
        self.expect_sym(Sym::RBracket)?;
        Ok(pairs)
    }

    fn mapping_expr(&mut self) -> PResult<MappingExpr> {
        let start = self.span();
        if self.eat_sym(Sym::LBracket) {
            let pairs = if self.eat_sym(Sym::RBracket) {
                Vec::new()
            } else {
                let k = self.expr()?;
                self.pairs_after_key(k)?
            };
            return Ok(MappingExpr::Lit {
                pairs,
                annot: None,
                span: self.since(start),
            });
        }
        if self.starts_ref() {
            let save = self.pos;
            if let Ok(Postfix::Upd(m)) = self.postfix(true) {
                return Ok(m);
            }
            self.pos = save;
        }
        Ok(MappingExpr::Base(self.expr()?))
    }

    fn slot_expr(&mut self) -> PResult<SlotExpr> {
        let start = self.span();
        if self.eat_kw(K::New) {
            let contract = self.cap_ident()?;
            let value = if self.eat_sym(Sym::LBrace) {
                self.expect_kw(K::Value)?;
                self.expect_sym(Sym::Colon)?;
                let v = self.slot_expr()?;
                self.expect_sym(Sym::RBrace)?;
                Some(Box::new(v))
            } else {
                None
            };
            self.expect_sym(Sym::LParen)?;
            let mut args = Vec::new();
            if !self.is_sym(Sym::RParen) {
                loop {
                    args.push(self.slot_expr()?);
                    if !self.eat_sym(Sym::Comma) {
                        break;
                    }
                }
            }
            self.expect_sym(Sym::RParen)?;
            return Ok(SlotExpr::New {
                contract,
                value,
                args,
                span: self.since(start),
            });
        }
        if self.is_kw(K::Addr) {
            let save = self.pos;
            let attempt = (|| -> PResult<SlotExpr> {
                self.advance();
                self.expect_sym(Sym::LParen)?;
                let inner = self.slot_expr()?;
                self.expect_sym(Sym::RParen)?;
                Ok(inner)
            })();
            match attempt {
                Ok(inner) if !self.continues_expr() => {
                    return Ok(SlotExpr::Addr(Box::new(inner), self.since(start)));
                }
                _ => self.pos = save,
            }
        }
        match self.mapping_expr()? {
            MappingExpr::Base(Expr {
                kind: ExprKind::Ref(r),
                ..
            }) => Ok(SlotExpr::Ref(r)),
            m => Ok(SlotExpr::Map(m)),
        }
    }
}

/// Integer literal helper for callers building ASTs from command-line text.
pub fn parse_int_literal(s: &str) -> Option<BigInt> {
    match parse_expr(s).ok()?.kind {
        ExprKind::Int(n) => Some(n),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_contract() {
        let spec = parse_spec(
            "contract C { constructor() iff true creates uint256 balance := 0 ensures true invariants true }",
        )
        .unwrap();
        assert_eq!(spec.contracts.len(), 1);
        let c = &spec.contracts[0];
        assert_eq!(c.ctor.cases.len(), 1);
        assert_eq!(c.ctor.cases[0].creates.len(), 1);
        assert_eq!(c.ctor.cases[0].cond, Expr::tt());
    }

    #[test]
    fn implication_is_right_associative() {
        let e = parse_expr("a ==> b ==> c").unwrap();
        let expected = Expr::implies(
            Expr::var("a"),
            Expr::implies(Expr::var("b"), Expr::var("c")),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn precedence_table() {
        let e = parse_expr("not a and b or c").unwrap();
        let expected = Expr::or(
            Expr::and(Expr::not(Expr::var("a")), Expr::var("b")),
            Expr::var("c"),
        );
        assert_eq!(e, expected);
        let e = parse_expr("1 + 2 * 3 exp 2 exp 1").unwrap();
        let expected = Expr::bin_i(
            IntOp::Add,
            Expr::int(1),
            Expr::bin_i(
                IntOp::Mul,
                Expr::int(2),
                Expr::bin_i(
                    IntOp::Exp,
                    Expr::int(3),
                    Expr::bin_i(IntOp::Exp, Expr::int(2), Expr::int(1)),
                ),
            ),
        );
        assert_eq!(e, expected);
        assert!(parse_expr("a < b < c").is_err());
    }

    #[test]
    fn references() {
        let e = parse_expr("(r as A).f[k]").unwrap();
        let r = Ref::var("r").coerce("A").field("f").index(Expr::var("k"));
        assert_eq!(e, Expr::reference(r));
        let e = parse_expr("r as A as B").unwrap();
        assert_eq!(e, Expr::reference(Ref::var("r").coerce("A").coerce("B")));
    }

    #[test]
    fn slot_expressions() {
        assert_eq!(
            parse_slot_expr("x").unwrap(),
            SlotExpr::Ref(Ref::var("x"))
        );
        assert_eq!(
            parse_slot_expr("m[1 => 2]").unwrap(),
            SlotExpr::Map(MappingExpr::upd(
                Ref::var("m"),
                vec![(Expr::int(1), MappingExpr::Base(Expr::int(2)))]
            ))
        );
        assert_eq!(
            parse_slot_expr("m[]").unwrap(),
            SlotExpr::Map(MappingExpr::upd(Ref::var("m"), vec![]))
        );
        assert_eq!(
            parse_slot_expr("m[1]").unwrap(),
            SlotExpr::Ref(Ref::var("m").index(Expr::int(1)))
        );
        assert_eq!(
            parse_slot_expr("addr(new A())").unwrap(),
            SlotExpr::addr(SlotExpr::new_contract("A", None, vec![]))
        );
        assert_eq!(
            parse_slot_expr("addr(x) == y").unwrap(),
            SlotExpr::expr(Expr::eq(Expr::addr(Ref::var("x")), Expr::var("y")))
        );
        let se = parse_slot_expr("new A{value: 5}(x, [1 => [2 => true]])").unwrap();
        match se {
            SlotExpr::New { value, args, .. } => {
                assert!(value.is_some());
                assert_eq!(args.len(), 2);
            }
            _ => panic!("expected new"),
        }
    }

    #[test]
    fn errors_recover_at_contract_boundaries() {
        let errs = parse_spec("contract A { constructor( } contract B { oops }").unwrap_err();
        assert_eq!(errs.len(), 2);
    }

    #[test]
    fn negative_literals() {
        assert_eq!(parse_expr("-5").unwrap(), Expr::int(-5));
        assert_eq!(
            parse_expr("x - 5").unwrap(),
            Expr::bin_i(IntOp::Sub, Expr::var("x"), Expr::int(5))
        );
        assert!(parse_expr("-x").is_err());
    }
}
