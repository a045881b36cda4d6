//! Plain-text workspace files: named rings, elements, morphisms, manifolds,
//! maps, groups, actions, modules and the objects built from them.
//!
//! ```text
//! ring S1 = gens 2 ; rels x0^2 + x1^2 - 1 ;
//! elem f in S1 = x0 ;
//! mor phi : A -> B = x0 + x1, x1 ;
//! manifold M = stdlib(sphere, 2) ;            # or: ring S1 dim 1
//! map g : M -> N = x0, x1 ;
//! group G = table [[0, 1], [1, 0]] ;          # or: cyclic(n), trivial
//! action A = group G on S1 by [[1, 0], [0, 1]], [[1, 0], [0, -1]] ;
//! module E = cotangent S1 ;                   # or: free S1 2, presented S1 gens 2 [[..]]
//! fibre W = g, h ;
//! stackmap s : A -> B = map g hom [0, 1] ;
//! equivariant L = action A module E by [[e]], [[e]] ;
//! ```
//!
//! Every declaration ends with `;`, names are single-assignment and may
//! only refer to earlier names. `#` starts a comment.

use std::fmt;

use crate::cmodule::{cotangent, free_module, ModulePresentation};
use crate::cring::{Ring, RingElement, RingMorphism, RingPresentation};
use crate::expr::{parse_with_arity, Rational, SmoothExpr};
use crate::geom::{fibre_product, FibreProduct, ManifoldPresentation, SmoothMap};
use crate::quotient::{FiniteGroup, LinearAction, RationalMatrix};
use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorkspaceError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for WorkspaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for WorkspaceError {}

type WResult<T> = std::result::Result<T, WorkspaceError>;

#[derive(Clone, Debug)]
pub enum GroupForm {
    Table,
    Cyclic(usize),
    Trivial,
}

#[derive(Clone, Debug)]
pub enum ModuleForm {
    Cotangent,
    Free(usize),
    Presented,
}

#[derive(Clone, Debug)]
pub enum Item {
    Ring(Ring),
    Elem {
        ring: String,
        elem: RingElement,
    },
    Mor {
        source: String,
        target: String,
        morphism: RingMorphism,
    },
    Manifold {
        form: ManifoldForm,
        manifold: ManifoldPresentation,
    },
    Map {
        source: String,
        target: String,
        map: SmoothMap,
    },
    Group {
        form: GroupForm,
        group: FiniteGroup,
    },
    Action {
        group: String,
        ring: String,
        action: LinearAction,
    },
    Module {
        ring: String,
        form: ModuleForm,
        module: ModulePresentation,
    },
    Fibre {
        left: String,
        right: String,
        fibre: Box<FibreProduct>,
    },
    StackMap {
        source: String,
        target: String,
        map: String,
        hom: Vec<usize>,
    },
    Equivariant {
        action: String,
        module: String,
        lifts: Vec<Vec<Vec<SmoothExpr>>>,
    },
}

impl Item {
    pub fn kind(&self) -> &'static str {
        match self {
            Item::Ring(_) => "ring",
            Item::Elem { .. } => "elem",
            Item::Mor { .. } => "mor",
            Item::Manifold { .. } => "manifold",
            Item::Map { .. } => "map",
            Item::Group { .. } => "group",
            Item::Action { .. } => "action",
            Item::Module { .. } => "module",
            Item::Fibre { .. } => "fibre",
            Item::StackMap { .. } => "stackmap",
            Item::Equivariant { .. } => "equivariant",
        }
    }
}

#[derive(Clone, Debug)]
pub enum ManifoldForm {
    Stdlib {
        name: String,
        params: Vec<usize>,
        expr: Option<SmoothExpr>,
    },
    Ring {
        ring: String,
    },
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub line: usize,
    pub item: Item,
}

#[derive(Clone, Debug, Default)]
pub struct Workspace {
    entries: Vec<Entry>,
}

impl Workspace {
    pub fn parse(src: &str) -> WResult<Workspace> {
        let mut s = Scanner { src, pos: 0 };
        let mut ws = Workspace::default();
        loop {
            s.skip_ws();
            if s.at_end() {
                return Ok(ws);
            }
            let start = s.pos;
            let (kw, kw_pos) = s.ident()?;
            let (name, name_pos) = s.ident()?;
            if ws.get(&name).is_some() {
                return Err(s.error_at(name_pos, format!("`{name}` is already declared")));
            }
            let item = match kw.as_str() {
                "ring" => ws.ring_decl(&mut s)?,
                "elem" => ws.elem_decl(&mut s)?,
                "mor" => ws.mor_decl(&mut s)?,
                "manifold" => ws.manifold_decl(&mut s)?,
                "map" => ws.map_decl(&mut s)?,
                "group" => ws.group_decl(&mut s)?,
                "action" => ws.action_decl(&mut s)?,
                "module" => ws.module_decl(&mut s)?,
                "fibre" => ws.fibre_decl(&mut s)?,
                "stackmap" => ws.stackmap_decl(&mut s)?,
                "equivariant" => ws.equivariant_decl(&mut s)?,
                _ => return Err(s.error_at(kw_pos, format!("unknown declaration `{kw}`"))),
            };
            let line = s.line_col(start).0;
            ws.entries.push(Entry { name, line, item });
        }
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&Item> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| &e.item)
    }

    fn lookup(&self, s: &mut Scanner, kinds: &[&str]) -> WResult<(String, &Item)> {
        let (name, pos) = s.ident()?;
        match self.get(&name) {
            None => Err(s.error_at(pos, format!("unknown name `{name}`"))),
            Some(item) if !kinds.contains(&item.kind()) => Err(s.error_at(
                pos,
                format!(
                    "`{name}` is a {}, expected {}",
                    item.kind(),
                    kinds.join(" or ")
                ),
            )),
            Some(item) => Ok((name, item)),
        }
    }

    /// The ring of a ring, manifold or fibre declaration.
    pub fn ring_of(&self, name: &str) -> Option<Ring> {
        match self.get(name)? {
            Item::Ring(r) => Some(r.clone()),
            Item::Manifold { manifold, .. } => Some(manifold.ring.clone()),
            Item::Fibre { fibre, .. } => Some(fibre.manifold.ring.clone()),
            _ => None,
        }
    }

    fn ring_ref(&self, s: &mut Scanner) -> WResult<(String, Ring)> {
        let (name, _) = self.lookup(s, &["ring", "manifold", "fibre"])?;
        let ring = self.ring_of(&name).expect("kind checked");
        Ok((name, ring))
    }

    fn manifold_ref(&self, s: &mut Scanner) -> WResult<(String, ManifoldPresentation)> {
        let (name, item) = self.lookup(s, &["manifold", "fibre"])?;
        let m = match item {
            Item::Manifold { manifold, .. } => manifold.clone(),
            Item::Fibre { fibre, .. } => fibre.manifold.clone(),
            _ => unreachable!(),
        };
        Ok((name, m))
    }

    fn ring_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.expect("=")?;
        s.keyword("gens")?;
        let n = s.natural()?;
        s.expect(";")?;
        let pos = s.pos;
        let mut rels = Vec::new();
        if s.try_keyword("rels") {
            rels = s.expr_list(n, ";")?;
            s.expect(";")?;
        }
        RingPresentation::new(n, rels)
            .map(Item::Ring)
            .map_err(|e| s.lib_error(pos, e))
    }

    fn elem_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.keyword("in")?;
        let (ring_name, ring) = self.ring_ref(s)?;
        s.expect("=")?;
        let pos = s.pos;
        let e = s.expr(ring.arity(), ";")?;
        s.expect(";")?;
        let elem = RingElement::new(&ring, e).map_err(|e| s.lib_error(pos, e))?;
        Ok(Item::Elem {
            ring: ring_name,
            elem,
        })
    }

    fn mor_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.expect(":")?;
        let (source, a) = self.ring_ref(s)?;
        s.expect("->")?;
        let (target, b) = self.ring_ref(s)?;
        s.expect("=")?;
        let pos = s.pos;
        let images = s.expr_list(b.arity(), ";")?;
        s.expect(";")?;
        let morphism = RingMorphism::new(&a, &b, images).map_err(|e| s.lib_error(pos, e))?;
        Ok(Item::Mor {
            source,
            target,
            morphism,
        })
    }

    fn manifold_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.expect("=")?;
        let (kw, pos) = s.ident()?;
        let item = match kw.as_str() {
            "stdlib" => {
                s.expect("(")?;
                let (name, _) = s.ident()?;
                let mut params = Vec::new();
                let mut expr = None;
                while s.try_symbol(",") {
                    if name == "open_subset" && params.len() == 1 {
                        expr = Some(s.expr(params[0], ")")?);
                    } else {
                        params.push(s.natural()?);
                    }
                }
                s.expect(")")?;
                let manifold = ManifoldPresentation::stdlib(&name, &params, expr.as_ref())
                    .map_err(|e| s.lib_error(pos, e))?;
                Item::Manifold {
                    form: ManifoldForm::Stdlib { name, params, expr },
                    manifold,
                }
            }
            "ring" => {
                let (ring_name, ring) = self.ring_ref(s)?;
                s.keyword("dim")?;
                let dim = s.natural()?;
                let manifold = ManifoldPresentation::new(ring_name.clone(), ring, dim);
                Item::Manifold {
                    form: ManifoldForm::Ring { ring: ring_name },
                    manifold,
                }
            }
            _ => return Err(s.error_at(pos, format!("expected `stdlib` or `ring`, found `{kw}`"))),
        };
        s.expect(";")?;
        Ok(item)
    }

    fn map_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.expect(":")?;
        let (source, m) = self.manifold_ref(s)?;
        s.expect("->")?;
        let (target, n) = self.manifold_ref(s)?;
        s.expect("=")?;
        let pos = s.pos;
        let comps = s.expr_list(m.arity(), ";")?;
        s.expect(";")?;
        let map = SmoothMap::new(&m, &n, comps).map_err(|e| s.lib_error(pos, e))?;
        Ok(Item::Map {
            source,
            target,
            map,
        })
    }

    fn group_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.expect("=")?;
        let (kw, pos) = s.ident()?;
        let (form, group) = match kw.as_str() {
            "trivial" => (GroupForm::Trivial, FiniteGroup::trivial()),
            "cyclic" => {
                s.expect("(")?;
                let n = s.natural()?;
                s.expect(")")?;
                if n == 0 {
                    return Err(s.error_at(pos, "cyclic group order must be positive".into()));
                }
                (GroupForm::Cyclic(n), FiniteGroup::cyclic(n))
            }
            "table" => {
                let mut rows = Vec::new();
                s.expect("[")?;
                loop {
                    s.expect("[")?;
                    let mut row = vec![s.natural()?];
                    while s.try_symbol(",") {
                        row.push(s.natural()?);
                    }
                    s.expect("]")?;
                    rows.push(row);
                    if !s.try_symbol(",") {
                        break;
                    }
                }
                s.expect("]")?;
                (
                    GroupForm::Table,
                    FiniteGroup::from_table(rows).map_err(|e| s.lib_error(pos, e))?,
                )
            }
            _ => {
                return Err(s.error_at(
                    pos,
                    format!("expected `table`, `cyclic` or `trivial`, found `{kw}`"),
                ))
            }
        };
        s.expect(";")?;
        Ok(Item::Group { form, group })
    }

    fn action_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.expect("=")?;
        s.keyword("group")?;
        let (group_name, item) = self.lookup(s, &["group"])?;
        let Item::Group { group, .. } = item else {
            unreachable!()
        };
        let group = group.clone();
        s.keyword("on")?;
        let (ring_name, ring) = self.ring_ref(s)?;
        s.keyword("by")?;
        let pos = s.pos;
        let mut matrices = vec![s.rational_matrix()?];
        while s.try_symbol(",") {
            matrices.push(s.rational_matrix()?);
        }
        s.expect(";")?;
        let action =
            LinearAction::new(group, ring.arity(), matrices).map_err(|e| s.lib_error(pos, e))?;
        Ok(Item::Action {
            group: group_name,
            ring: ring_name,
            action,
        })
    }

    fn module_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.expect("=")?;
        let (kw, pos) = s.ident()?;
        let (ring_name, ring) = self.ring_ref(s)?;
        let (form, module) = match kw.as_str() {
            "cotangent" => (ModuleForm::Cotangent, cotangent(&ring)),
            "free" => {
                let n = s.natural()?;
                (ModuleForm::Free(n), free_module(&ring, n))
            }
            "presented" => {
                s.keyword("gens")?;
                let g = s.natural()?;
                let rows = s.expr_matrix(ring.arity())?;
                if rows.len() != g {
                    return Err(s.error_at(pos, format!("{} rows for {g} generators", rows.len())));
                }
                let r = rows.first().map_or(0, Vec::len);
                let labels = (0..g).map(|i| format!("e{i}")).collect();
                (
                    ModuleForm::Presented,
                    ModulePresentation::new(&ring, rows, r, labels)
                        .map_err(|e| s.lib_error(pos, e))?,
                )
            }
            _ => {
                return Err(s.error_at(
                    pos,
                    format!("expected `cotangent`, `free` or `presented`, found `{kw}`"),
                ))
            }
        };
        s.expect(";")?;
        Ok(Item::Module {
            ring: ring_name,
            form,
            module,
        })
    }

    fn fibre_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.expect("=")?;
        let pos = s.pos;
        let (left, g) = self.lookup(s, &["map"])?;
        let Item::Map { map: g, .. } = g else {
            unreachable!()
        };
        let g = g.clone();
        s.expect(",")?;
        let (right, h) = self.lookup(s, &["map"])?;
        let Item::Map { map: h, .. } = h else {
            unreachable!()
        };
        s.expect(";")?;
        if !crate::cring::same_ring(&g.target.ring, &h.target.ring) {
            return Err(s.error_at(
                pos,
                format!("`{left}` and `{right}` have different targets"),
            ));
        }
        let fibre = fibre_product(&g, h).map_err(|e| s.lib_error(pos, e))?;
        Ok(Item::Fibre {
            left,
            right,
            fibre: Box::new(fibre),
        })
    }

    fn stackmap_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.expect(":")?;
        let (source, _) = self.lookup(s, &["action"])?;
        s.expect("->")?;
        let (target, _) = self.lookup(s, &["action"])?;
        s.expect("=")?;
        s.keyword("map")?;
        let (map, _) = self.lookup(s, &["map"])?;
        s.keyword("hom")?;
        s.expect("[")?;
        let mut hom = vec![s.natural()?];
        while s.try_symbol(",") {
            hom.push(s.natural()?);
        }
        s.expect("]")?;
        s.expect(";")?;
        Ok(Item::StackMap {
            source,
            target,
            map,
            hom,
        })
    }

    fn equivariant_decl(&self, s: &mut Scanner) -> WResult<Item> {
        s.expect("=")?;
        s.keyword("action")?;
        let (action, item) = self.lookup(s, &["action"])?;
        let Item::Action { action: a, .. } = item else {
            unreachable!()
        };
        let arity = a.arity();
        s.keyword("module")?;
        let (module, _) = self.lookup(s, &["module"])?;
        s.keyword("by")?;
        let mut lifts = vec![s.expr_matrix(arity)?];
        while s.try_symbol(",") {
            lifts.push(s.expr_matrix(arity)?);
        }
        s.expect(";")?;
        Ok(Item::Equivariant {
            action,
            module,
            lifts,
        })
    }

    /// Canonical text of the workspace: one declaration per line.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&format!("{} {} {}\n", e.item.kind(), e.name, body(&e.item)));
        }
        out
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn matrix_text<T: fmt::Display>(rows: &[Vec<T>]) -> String {
    format!(
        "[{}]",
        rows.iter()
            .map(|r| format!("[{}]", join(r)))
            .collect::<Vec<_>>()
            .join(", ")
    )
}

fn rational_text(m: &RationalMatrix) -> String {
    matrix_text(m)
}

fn body(item: &Item) -> String {
    match item {
        Item::Ring(r) if r.relations().is_empty() => format!("= gens {} ;", r.arity()),
        Item::Ring(r) => format!("= gens {} ; rels {} ;", r.arity(), join(r.relations())),
        Item::Elem { ring, elem } => format!("in {ring} = {} ;", elem.ambient()),
        Item::Mor {
            source,
            target,
            morphism,
        } => format!(": {source} -> {target} = {} ;", join(morphism.images())),
        Item::Manifold {
            form: ManifoldForm::Stdlib { name, params, expr },
            ..
        } => {
            let mut args = vec![name.clone()];
            args.extend(params.iter().map(ToString::to_string));
            args.extend(expr.iter().map(ToString::to_string));
            format!("= stdlib({}) ;", args.join(", "))
        }
        Item::Manifold {
            form: ManifoldForm::Ring { ring },
            manifold,
        } => format!("= ring {ring} dim {} ;", manifold.dim),
        Item::Map {
            source,
            target,
            map,
        } => format!(": {source} -> {target} = {} ;", join(&map.components)),
        Item::Group {
            form: GroupForm::Trivial,
            ..
        } => "= trivial ;".into(),
        Item::Group {
            form: GroupForm::Cyclic(n),
            ..
        } => format!("= cyclic({n}) ;"),
        Item::Group {
            form: GroupForm::Table,
            group,
        } => format!("= table {} ;", matrix_text(group.table())),
        Item::Action {
            group,
            ring,
            action,
        } => {
            let mats: Vec<String> = (0..action.group().order())
                .map(|g| rational_text(action.matrix(g)))
                .collect();
            format!("= group {group} on {ring} by {} ;", mats.join(", "))
        }
        Item::Module {
            ring,
            form: ModuleForm::Cotangent,
            ..
        } => format!("= cotangent {ring} ;"),
        Item::Module {
            ring,
            form: ModuleForm::Free(n),
            ..
        } => format!("= free {ring} {n} ;"),
        Item::Module {
            ring,
            form: ModuleForm::Presented,
            module,
        } => {
            format!(
                "= presented {ring} gens {} {} ;",
                module.generators(),
                matrix_text(module.rows())
            )
        }
        Item::Fibre { left, right, .. } => format!("= {left}, {right} ;"),
        Item::StackMap {
            source,
            target,
            map,
            hom,
        } => {
            format!(": {source} -> {target} = map {map} hom [{}] ;", join(hom))
        }
        Item::Equivariant {
            action,
            module,
            lifts,
        } => {
            let mats: Vec<String> = lifts.iter().map(|m| matrix_text(m)).collect();
            format!("= action {action} module {module} by {} ;", mats.join(", "))
        }
    }
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl Scanner<'_> {
    fn line_col(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    fn error_at(&self, pos: usize, message: String) -> WorkspaceError {
        let (line, column) = self.line_col(pos);
        WorkspaceError {
            line,
            column,
            message,
        }
    }

    fn lib_error(&self, pos: usize, e: Error) -> WorkspaceError {
        self.error_at(pos, e.to_string())
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        loop {
            let r = self.rest();
            let trimmed = r.trim_start();
            let skip = r.len() - trimmed.len();
            let comment = if trimmed.starts_with('#') {
                trimmed.find('\n').unwrap_or(trimmed.len())
            } else {
                0
            };
            self.pos += skip + comment;
            if comment == 0 {
                return;
            }
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn describe_next(&self) -> String {
        match self.rest().chars().next() {
            None => "end of input".into(),
            Some(c) => format!("`{c}`"),
        }
    }

    fn ident(&mut self) -> WResult<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .char_indices()
            .find(|&(i, c)| {
                !(c == '_' || c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_alphanumeric()))
            })
            .map_or(self.rest().len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error_at(
                start,
                format!("expected a name, found {}", self.describe_next()),
            ));
        }
        self.pos += len;
        Ok((self.src[start..self.pos].to_string(), start))
    }

    fn keyword(&mut self, kw: &str) -> WResult<()> {
        self.skip_ws();
        let start = self.pos;
        match self.ident() {
            Ok((w, _)) if w == kw => Ok(()),
            _ => {
                self.pos = start;
                Err(self.error_at(
                    start,
                    format!("expected `{kw}`, found {}", self.describe_next()),
                ))
            }
        }
    }

    fn try_keyword(&mut self, kw: &str) -> bool {
        let start = self.pos;
        if self.keyword(kw).is_ok() {
            true
        } else {
            self.pos = start;
            false
        }
    }

    fn try_symbol(&mut self, sym: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(sym) {
            self.pos += sym.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> WResult<()> {
        if self.try_symbol(sym) {
            Ok(())
        } else {
            Err(self.error_at(
                self.pos,
                format!("expected `{sym}`, found {}", self.describe_next()),
            ))
        }
    }

    fn natural(&mut self) -> WResult<usize> {
        self.skip_ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        self.pos += len;
        self.src[start..self.pos].parse().map_err(|_| {
            self.error_at(
                start,
                format!(
                    "expected a natural number, found {}",
                    self.describe_at(start)
                ),
            )
        })
    }

    fn describe_at(&self, pos: usize) -> String {
        match self.src[pos..].chars().next() {
            None => "end of input".into(),
            Some(c) => format!("`{c}`"),
        }
    }

    /// Raw expression text up to a top-level `,`, `]` or `terminator`,
    /// with comments blanked out.
    fn raw_expr(&mut self, terminator: &str) -> WResult<(String, usize)> {
        self.skip_ws();
        let start = self.pos;
        let mut depth = 0usize;
        let mut text = String::new();
        let mut in_comment = false;
        for c in self.rest().chars() {
            if in_comment {
                in_comment = c != '\n';
                text.push(if c == '\n' { '\n' } else { ' ' });
                continue;
            }
            match c {
                '#' => {
                    in_comment = true;
                    text.push(' ');
                    continue;
                }
                '(' => depth += 1,
                ')' if depth > 0 => depth -= 1,
                _ if depth == 0 && (c == ',' || c == ']' || terminator.starts_with(c)) => break,
                _ => {}
            }
            text.push(c);
        }
        self.pos += text.len();
        if text.trim().is_empty() {
            return Err(self.error_at(
                start,
                format!("expected an expression, found {}", self.describe_next()),
            ));
        }
        Ok((text, start))
    }

    fn expr(&mut self, arity: usize, terminator: &str) -> WResult<SmoothExpr> {
        let (text, start) = self.raw_expr(terminator)?;
        parse_with_arity(&text, Some(arity)).map_err(|e| match e {
            Error::Syntax { offset, message } => self.error_at(start + offset, message),
            Error::UnknownPrimitive { ref name, offset } => {
                self.error_at(start + offset, format!("unknown name `{name}`"))
            }
            other => self.error_at(start, other.to_string()),
        })
    }

    /// Comma-separated expressions; empty when `terminator` comes first.
    fn expr_list(&mut self, arity: usize, terminator: &str) -> WResult<Vec<SmoothExpr>> {
        self.skip_ws();
        if self.rest().starts_with(terminator) {
            return Ok(Vec::new());
        }
        let mut out = vec![self.expr(arity, terminator)?];
        while self.try_symbol(",") {
            out.push(self.expr(arity, terminator)?);
        }
        Ok(out)
    }

    /// `[[e, ...], ...]`, or `[]` for no rows. Rows may be `[]`.
    fn expr_matrix(&mut self, arity: usize) -> WResult<Vec<Vec<SmoothExpr>>> {
        self.expect("[")?;
        let mut rows = Vec::new();
        if self.try_symbol("]") {
            return Ok(rows);
        }
        loop {
            self.expect("[")?;
            rows.push(self.expr_list(arity, "]")?);
            self.expect("]")?;
            if !self.try_symbol(",") {
                break;
            }
        }
        self.expect("]")?;
        Ok(rows)
    }

    fn rational_matrix(&mut self) -> WResult<RationalMatrix> {
        let pos = self.pos;
        let rows = self.expr_matrix(0)?;
        rows.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|e| {
                        e.as_const().cloned().ok_or_else(|| {
                            self.error_at(pos, format!("`{e}` is not a rational number"))
                        })
                    })
                    .collect::<WResult<Vec<Rational>>>()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# circle and a line
ring S1 = gens 2 ; rels x0^2 + x1^2 - 1 ;
ring L = gens 2 ; rels x1 ;
ring R2 = gens 2 ;
elem f in S1 = x0*x1 + 1 ;
mor inc : R2 -> S1 = x0, x1 ;
manifold C = stdlib(circle) ;
manifold U = stdlib(open_subset, 1, x0) ;
manifold P = ring L dim 1 ;
map g : C -> C = -x0, x1 ;
group G = table [[0, 1], [1, 0]] ;
group Z4 = cyclic(4) ;
action A = group G on S1 by [[1, 0], [0, 1]], [[1, 0], [0, -1]] ;
module E = cotangent S1 ;
module F = presented S1 gens 2 [[x0], [x1]] ;
fibre W = g, g ;
";

    #[test]
    fn echo_is_idempotent() {
        let ws = Workspace::parse(SAMPLE).unwrap();
        assert_eq!(ws.entries().len(), 15);
        let once = ws.echo();
        let twice = Workspace::parse(&once).unwrap().echo();
        assert_eq!(once, twice);
        assert!(once.contains("mor inc : R2 -> S1 = x0, x1 ;"), "{once}");
        assert!(once.contains("action A = group G on S1 by [[1, 0], [0, 1]], [[1, 0], [0, -1]] ;"));
        assert_eq!(Workspace::parse("").unwrap().echo(), "");
        assert_eq!(Workspace::parse("  # only a comment\n").unwrap().echo(), "");
    }

    #[test]
    fn errors_have_positions() {
        let e = Workspace::parse("ring R = gens 1 ;\nelem f in Q = x0 ;").unwrap_err();
        assert_eq!((e.line, e.column), (2, 11));
        assert!(e.message.contains("`Q`"));
        let e = Workspace::parse("ring R = gens 1 ; rels x0 + ;").unwrap_err();
        assert_eq!(e.line, 1);
        let e = Workspace::parse("ring R = gens 1 ; rels x3 ;").unwrap_err();
        assert!(
            e.message.contains("x3") || e.message.contains("3"),
            "{}",
            e.message
        );
        assert!(Workspace::parse("ring R = gens 1 ;\nring R = gens 2 ;").is_err());
        assert!(Workspace::parse("group G = table [[0, 1], [1, 1]] ;").is_err());
        let e = Workspace::parse("ring R = gens 1 ; rels foo(x0) ;").unwrap_err();
        assert!(e.message.contains("foo"));
    }
}
