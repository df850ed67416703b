//! π*-structures, long homotopy sequences and their exactness.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::world::{Kind, World};
use crate::{Error, Result};

/// A graded object truncated at degree `top`: pointed object in degree 0,
/// group in degree 1, abelian groups above with an action of degree 1.
#[derive(Clone, Debug)]
pub struct PiStructure<W: World> {
    terms: Vec<W::Obj>,
    actions: Vec<W::Act>,
}

impl<W: World> PiStructure<W> {
    /// `actions[k]` is the action of degree 1 on degree `k + 2`.
    pub fn new(mut terms: Vec<W::Obj>, actions: Vec<W::Act>) -> Result<Self> {
        if terms.is_empty() {
            terms.push(W::point());
        }
        if terms.len() == 1 {
            terms.push(W::point());
        }
        if W::kind(&terms[1]) == Kind::Set {
            return Err(Error::invalid("degree 1 of a pi-structure must be a group"));
        }
        for (n, t) in terms.iter().enumerate().skip(2) {
            if W::kind(t) != Kind::Abelian {
                return Err(Error::invalid(format!("degree {n} of a pi-structure must be abelian")));
            }
        }
        let higher = terms.len() - 2;
        if actions.len() != higher {
            return Err(Error::invalid(format!("expected {higher} actions, got {}", actions.len())));
        }
        for (k, a) in actions.iter().enumerate() {
            let n = k + 2;
            if !W::same_obj(W::act_group(a), &terms[1]) || !W::same_obj(W::act_carrier(a), &terms[n]) {
                return Err(Error::invalid(format!("action on degree {n} has the wrong group or carrier")));
            }
            if !W::act_is_valid(a) || !W::act_by_automorphisms(a) {
                return Err(Error::invalid(format!("degree 1 does not act by automorphisms on degree {n}")));
            }
        }
        Ok(PiStructure { terms, actions })
    }

    pub fn with_trivial_actions(terms: Vec<W::Obj>) -> Result<Self> {
        let mut terms = terms;
        while terms.len() < 2 {
            terms.push(W::point());
        }
        let actions = terms.iter().skip(2).map(|t| W::trivial_action(&terms[1], t)).collect();
        Self::new(terms, actions)
    }

    pub fn point() -> Self {
        Self::with_trivial_actions(Vec::new()).expect("the point is a pi-structure")
    }

    /// Highest stored degree; all higher degrees are trivial.
    pub fn top(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn term(&self, n: usize) -> W::Obj {
        self.terms.get(n).cloned().unwrap_or_else(W::point)
    }

    pub fn terms(&self) -> &[W::Obj] {
        &self.terms
    }

    pub fn action(&self, n: usize) -> W::Act {
        match n.checked_sub(2).and_then(|k| self.actions.get(k)) {
            Some(a) => a.clone(),
            None => W::trivial_action(&self.terms[1], &self.term(n)),
        }
    }

    pub fn is_point(&self) -> bool {
        self.terms.iter().all(W::is_point)
    }

    /// Same structure padded with trivial degrees up to `top`.
    pub fn padded(&self, top: usize) -> Self {
        let mut s = self.clone();
        while s.terms.len() <= top {
            let t = W::point();
            s.actions.push(W::trivial_action(&s.terms[1], &t));
            s.terms.push(t);
        }
        s
    }
}

/// A degree-preserving morphism of π*-structures.
#[derive(Clone, Debug)]
pub struct PiMorphism<W: World> {
    pub maps: Vec<W::Map>,
}

impl<W: World> PiMorphism<W> {
    pub fn identity(s: &PiStructure<W>) -> Self {
        PiMorphism { maps: s.terms.iter().map(W::identity).collect() }
    }

    pub fn zero(a: &PiStructure<W>, b: &PiStructure<W>) -> Self {
        let top = a.top().max(b.top());
        PiMorphism { maps: (0..=top).map(|n| W::zero_map(&a.term(n), &b.term(n))).collect() }
    }

    pub fn map(&self, n: usize) -> Option<&W::Map> {
        self.maps.get(n)
    }

    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(W::is_iso)
    }

    /// Why this is not a morphism `a -> b`, if it is not.
    pub fn defect(&self, a: &PiStructure<W>, b: &PiStructure<W>) -> Option<String> {
        let top = a.top().max(b.top());
        if self.maps.len() != top + 1 {
            return Some(format!("expected {} components, got {}", top + 1, self.maps.len()));
        }
        for (n, f) in self.maps.iter().enumerate() {
            if !W::same_obj(W::src(f), &a.term(n)) || !W::same_obj(W::tgt(f), &b.term(n)) {
                return Some(format!("component {n} has the wrong source or target"));
            }
            if !W::is_pointed(f) {
                return Some(format!("component {n} is not pointed"));
            }
            if n >= 1 && !W::is_hom(f) {
                return Some(format!("component {n} is not a homomorphism"));
            }
            if n >= 2 && !W::is_equivariant(&a.action(n), &b.action(n), &self.maps[1], f) {
                return Some(format!("component {n} is not equivariant"));
            }
        }
        None
    }
}

/// `F --f--> G --g--> H ==∂==> F` with `H_1` acting on `F_0`.
///
/// `boundary[k]` is `∂_{k+1}: H_{k+1} -> F_k`.
#[derive(Clone, Debug)]
pub struct LongHtpySequence<W: World> {
    pub fib: PiStructure<W>,
    pub total: PiStructure<W>,
    pub base: PiStructure<W>,
    pub f: PiMorphism<W>,
    pub g: PiMorphism<W>,
    pub boundary: Vec<W::Map>,
    pub action: W::Act,
}

/// Verdicts for the five axioms of a long homotopy sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub morphisms: bool,
    pub boundary_homs: bool,
    pub equivariance: bool,
    pub central: bool,
    pub composites: bool,
    /// `∂_1` is the action applied to the base point.
    pub boundary_is_orbit_map: bool,
    /// The action fixes the base point (not required, reported).
    pub pointed_action: bool,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn all(&self) -> bool {
        self.morphisms && self.boundary_homs && self.equivariance && self.central && self.composites && self.boundary_is_orbit_map
    }
}

/// A place where a long sequence fails to be exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactSlot {
    /// `im f_n != Ker g_n`.
    Total(usize),
    /// `im g_n != Ker ∂_n`.
    Base(usize),
    /// `im ∂_{n+1} != Ker f_n`.
    Fiber(usize),
    /// `F_0 / H_1 -> G_0` is not injective.
    OrbitMono,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    /// Exact at every slot, including the orbit-space monomorphism.
    pub exact: bool,
    /// Image equals kernel at every slot (no monomorphism condition).
    pub weak: bool,
    pub failures: Vec<ExactSlot>,
}

impl<W: World> LongHtpySequence<W> {
    pub fn new(
        fib: PiStructure<W>,
        total: PiStructure<W>,
        base: PiStructure<W>,
        f: PiMorphism<W>,
        g: PiMorphism<W>,
        boundary: Vec<W::Map>,
        action: W::Act,
    ) -> Result<Self> {
        let top = fib.top().max(total.top()).max(base.top());
        let (fib, total, base) = (fib.padded(top), total.padded(top), base.padded(top));
        if f.maps.len() != top + 1 || g.maps.len() != top + 1 {
            return Err(Error::invalid(format!("morphisms must have {} components", top + 1)));
        }
        if boundary.len() != top {
            return Err(Error::invalid(format!("expected {top} boundary maps, got {}", boundary.len())));
        }
        for (k, d) in boundary.iter().enumerate() {
            if !W::same_obj(W::src(d), &base.term(k + 1)) || !W::same_obj(W::tgt(d), &fib.term(k)) {
                return Err(Error::invalid(format!("boundary in degree {} has the wrong source or target", k + 1)));
            }
        }
        if !W::same_obj(W::act_group(&action), &base.term(1)) || !W::same_obj(W::act_carrier(&action), &fib.term(0)) {
            return Err(Error::invalid("the action must be of H_1 on F_0"));
        }
        Ok(LongHtpySequence { fib, total, base, f, g, boundary, action })
    }

    pub fn top(&self) -> usize {
        self.fib.top()
    }

    /// `∂_n` for `n >= 1`; trivial above the top degree.
    pub fn d(&self, n: usize) -> W::Map {
        match self.boundary.get(n - 1) {
            Some(m) => m.clone(),
            None => W::zero_map(&self.base.term(n), &self.fib.term(n - 1)),
        }
    }

    pub fn validate(&self) -> AxiomReport {
        let mut r = AxiomReport::default();
        let top = self.top();
        let fail = |r: &mut AxiomReport, m: String| r.failures.push(m);

        r.morphisms = true;
        for (name, m, a, b) in [("f", &self.f, &self.fib, &self.total), ("g", &self.g, &self.total, &self.base)] {
            if let Some(why) = m.defect(a, b) {
                r.morphisms = false;
                fail(&mut r, format!("(1) {name}: {why}"));
            }
        }

        r.boundary_homs = true;
        for n in 1..=top {
            let d = self.d(n);
            let ok = W::is_pointed(&d) && (n == 1 || W::is_hom(&d));
            if !ok {
                r.boundary_homs = false;
                fail(&mut r, format!("(2) boundary in degree {n} is not a homomorphism"));
            }
        }

        r.equivariance = W::act_is_valid(&self.action)
            && W::is_equivariant_boundary(&self.action, &self.d(1))
            && W::is_invariant(&self.action, &self.f.maps[0]);
        if !r.equivariance {
            fail(&mut r, String::from("(3) boundary or f_0 is not equivariant"));
        }

        let d2 = self.d(2);
        let f1 = self.fib.term(1);
        r.central = W::is_central(&f1, &W::image(&d2, &W::full(&self.base.term(2))));
        if !r.central {
            fail(&mut r, String::from("(4) image of the boundary is not central in F_1"));
        }

        r.composites = true;
        for n in 0..=top {
            let gf = W::compose(&self.g.maps[n], &self.f.maps[n]);
            if !W::is_trivial_map(&gf) {
                r.composites = false;
                fail(&mut r, format!("(5) g o f is not trivial in degree {n}"));
            }
            if n >= 1 {
                let dg = W::compose(&self.d(n), &self.g.maps[n]);
                if !W::is_trivial_map(&dg) {
                    r.composites = false;
                    fail(&mut r, format!("(5) boundary o g is not trivial in degree {n}"));
                }
                let fd = W::compose(&self.f.maps[n - 1], &self.d(n));
                if !W::is_trivial_map(&fd) {
                    r.composites = false;
                    fail(&mut r, format!("(5) f o boundary is not trivial in degree {n}"));
                }
            }
        }

        let orbit = W::act_on_base(&self.action);
        r.boundary_is_orbit_map = W::map_eq(&orbit, &self.d(1));
        if !r.boundary_is_orbit_map {
            fail(&mut r, String::from("boundary in degree 1 differs from the orbit map of the base point"));
        }
        r.pointed_action = W::is_trivial_map(&orbit);
        r
    }

    /// Exactness at every slot; errors if the axioms fail.
    pub fn check_exactness(&self) -> Result<ExactnessReport> {
        let v = self.validate();
        if !v.all() {
            return Err(Error::invalid(format!("not a long homotopy sequence: {}", v.failures.join("; "))));
        }
        Ok(self.exactness_unchecked())
    }

    pub fn exactness_unchecked(&self) -> ExactnessReport {
        let top = self.top();
        let mut failures = Vec::new();
        for n in 0..=top {
            let (fo, go, ho) = (self.fib.term(n), self.total.term(n), self.base.term(n));
            let im_f = W::image(&self.f.maps[n], &W::full(&fo));
            let ker_g = W::preimage(&self.g.maps[n], &W::base(&ho));
            if !W::sub_eq(&go, &im_f, &ker_g) {
                failures.push(ExactSlot::Total(n));
            }
            if n >= 1 {
                let im_g = W::image(&self.g.maps[n], &W::full(&go));
                let ker_d = W::preimage(&self.d(n), &W::base(&self.fib.term(n - 1)));
                if !W::sub_eq(&ho, &im_g, &ker_d) {
                    failures.push(ExactSlot::Base(n));
                }
            }
            let im_d = W::image(&self.d(n + 1), &W::full(&self.base.term(n + 1)));
            let ker_f = W::preimage(&self.f.maps[n], &W::base(&go));
            if !W::sub_eq(&fo, &im_d, &ker_f) {
                failures.push(ExactSlot::Fiber(n));
            }
        }
        let weak = failures.is_empty();
        let f0 = self.fib.term(0);
        let mono = match W::orbits(&self.action, &W::full(&self.base.term(1)), &W::full(&f0)) {
            Ok(q) => W::quot_injective(&q, &self.f.maps[0]),
            Err(_) => false,
        };
        if !mono {
            failures.push(ExactSlot::OrbitMono);
        }
        ExactnessReport { exact: weak && mono, weak, failures }
    }

    /// Degree-wise product of sequences.
    pub fn product(seqs: &[Self]) -> Result<Self> {
        let top = seqs.iter().map(|s| s.top()).max().unwrap_or(0);
        let seqs: Vec<Self> = seqs.iter().map(|s| s.padded(top)).collect();
        let comp = |pick: &dyn Fn(&Self) -> PiStructure<W>| pi_product::<W>(&seqs.iter().map(pick).collect::<Vec<_>>());
        let fib = comp(&|s| s.fib.clone())?;
        let total = comp(&|s| s.total.clone())?;
        let base = comp(&|s| s.base.clone())?;
        let prod_morph = |pick: &dyn Fn(&Self) -> &PiMorphism<W>| PiMorphism {
            maps: (0..=top).map(|n| W::product_map(&seqs.iter().map(|s| pick(s).maps[n].clone()).collect::<Vec<_>>())).collect(),
        };
        let f = prod_morph(&|s| &s.f);
        let g = prod_morph(&|s| &s.g);
        let boundary = (1..=top).map(|n| W::product_map(&seqs.iter().map(|s| s.d(n)).collect::<Vec<_>>())).collect();
        let action = W::product_action(&seqs.iter().map(|s| s.action.clone()).collect::<Vec<_>>());
        if seqs.is_empty() {
            let p = PiStructure::point();
            let z = PiMorphism::zero(&p, &p);
            return Self::new(p.clone(), p.clone(), p.clone(), z.clone(), z, Vec::new(), W::trivial_action(&W::point(), &W::point()));
        }
        Self::new(fib, total, base, f, g, boundary, action)
    }

    fn padded(&self, top: usize) -> Self {
        let mut s = self.clone();
        let old = s.top();
        s.fib = s.fib.padded(top);
        s.total = s.total.padded(top);
        s.base = s.base.padded(top);
        for n in old + 1..=top {
            s.f.maps.push(W::zero_map(&s.fib.term(n), &s.total.term(n)));
            s.g.maps.push(W::zero_map(&s.total.term(n), &s.base.term(n)));
        }
        for n in old + 1..=top {
            s.boundary.push(W::zero_map(&s.base.term(n), &s.fib.term(n - 1)));
        }
        s
    }
}

/// Degree-wise product with the product actions. The empty product is the point.
pub fn pi_product<W: World>(xs: &[PiStructure<W>]) -> Result<PiStructure<W>> {
    if xs.is_empty() {
        return Ok(PiStructure::point());
    }
    let top = xs.iter().map(|x| x.top()).max().unwrap_or(1);
    let xs: Vec<PiStructure<W>> = xs.iter().map(|x| x.padded(top)).collect();
    let terms: Vec<W::Obj> = (0..=top).map(|n| W::product(&xs.iter().map(|x| x.term(n)).collect::<Vec<_>>())).collect();
    let actions = (2..=top).map(|n| W::product_action(&xs.iter().map(|x| x.action(n)).collect::<Vec<_>>())).collect();
    PiStructure::new(terms, actions)
}

/// Projection of a product onto factor `i`.
pub fn pi_projection<W: World>(xs: &[PiStructure<W>], i: usize) -> PiMorphism<W> {
    let top = xs.iter().map(|x| x.top()).max().unwrap_or(1);
    let xs: Vec<PiStructure<W>> = xs.iter().map(|x| x.padded(top)).collect();
    PiMorphism { maps: (0..=top).map(|n| W::projection(&xs.iter().map(|x| x.term(n)).collect::<Vec<_>>(), i)).collect() }
}

/// A morphism of long homotopy sequences: one π*-morphism per row.
#[derive(Clone, Debug)]
pub struct SequenceMorphism<W: World> {
    pub fib: PiMorphism<W>,
    pub total: PiMorphism<W>,
    pub base: PiMorphism<W>,
}

impl<W: World> SequenceMorphism<W> {
    pub fn identity(s: &LongHtpySequence<W>) -> Self {
        SequenceMorphism { fib: PiMorphism::identity(&s.fib), total: PiMorphism::identity(&s.total), base: PiMorphism::identity(&s.base) }
    }

    pub fn is_iso(&self) -> bool {
        self.fib.is_iso() && self.total.is_iso() && self.base.is_iso()
    }

    /// Why this is not a morphism of sequences `a -> b`, if it is not.
    pub fn defect(&self, a: &LongHtpySequence<W>, b: &LongHtpySequence<W>) -> Option<String> {
        for (name, m, x, y) in
            [("fiber", &self.fib, &a.fib, &b.fib), ("total", &self.total, &a.total, &b.total), ("base", &self.base, &a.base, &b.base)]
        {
            if let Some(why) = m.defect(x, y) {
                return Some(format!("{name} component: {why}"));
            }
        }
        let top = a.top();
        for n in 0..=top {
            let l = W::compose(&b.f.maps[n], &self.fib.maps[n]);
            let r = W::compose(&self.total.maps[n], &a.f.maps[n]);
            if !W::map_eq(&l, &r) {
                return Some(format!("square with f does not commute in degree {n}"));
            }
            let l = W::compose(&b.g.maps[n], &self.total.maps[n]);
            let r = W::compose(&self.base.maps[n], &a.g.maps[n]);
            if !W::map_eq(&l, &r) {
                return Some(format!("square with g does not commute in degree {n}"));
            }
            if n >= 1 {
                let l = W::compose(&b.d(n), &self.base.maps[n]);
                let r = W::compose(&self.fib.maps[n - 1], &a.d(n));
                if !W::map_eq(&l, &r) {
                    return Some(format!("square with the boundary does not commute in degree {n}"));
                }
            }
        }
        if !W::is_equivariant(&a.action, &b.action, &self.base.maps[1], &self.fib.maps[0]) {
            return Some(String::from("degree-0 fiber component is not equivariant"));
        }
        None
    }
}

/// A finite diagram: `arrows` are `(i, j, map)` with `map: objects[i] -> objects[j]`.
#[derive(Clone, Debug)]
pub struct Diagram<T, M> {
    pub objects: Vec<T>,
    pub arrows: Vec<(usize, usize, M)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexShape {
    /// A finite poset generated by the arrows.
    Poset,
    /// A sequence `0 -> 1 -> ... -> k`.
    Sequence,
}

#[derive(Clone, Debug)]
pub struct Colimit<T> {
    pub value: T,
    /// Index whose value represents the colimit.
    pub stage: usize,
}

/// Locate the representing index of a filtered colimit: the maximum of a
/// finite filtered poset, or the stage from which a sequence is constant up
/// to isomorphism.
pub fn colimit_stage<T, M>(d: &Diagram<T, M>, shape: IndexShape, is_iso: impl Fn(&M) -> bool) -> Result<usize> {
    let k = d.objects.len();
    if k == 0 {
        return Err(Error::invalid("empty diagram"));
    }
    for (i, j, _) in &d.arrows {
        if *i >= k || *j >= k {
            return Err(Error::invalid(format!("arrow {i} -> {j} leaves the diagram")));
        }
    }
    match shape {
        IndexShape::Poset => {
            let mut le = vec![vec![false; k]; k];
            for (i, row) in le.iter_mut().enumerate() {
                row[i] = true;
            }
            for (i, j, _) in &d.arrows {
                le[*i][*j] = true;
            }
            for m in 0..k {
                for i in 0..k {
                    if le[i][m] {
                        for j in 0..k {
                            if le[m][j] {
                                le[i][j] = true;
                            }
                        }
                    }
                }
            }
            for i in 0..k {
                for j in 0..k {
                    if i != j && le[i][j] && le[j][i] {
                        return Err(Error::invalid(format!("indices {i} and {j} form a cycle; not a poset")));
                    }
                }
            }
            (0..k)
                .find(|&m| (0..k).all(|i| le[i][m]))
                .ok_or_else(|| Error::invalid("index poset is not filtered (no maximum)"))
        }
        IndexShape::Sequence => {
            let mut next: Vec<Option<&M>> = vec![None; k];
            for (i, j, m) in &d.arrows {
                if *j != *i + 1 || next[*i].is_some() {
                    return Err(Error::invalid("sequential diagrams need exactly the arrows i -> i+1"));
                }
                next[*i] = Some(m);
            }
            if next[..k - 1].iter().any(|m| m.is_none()) {
                return Err(Error::invalid("sequential diagrams need exactly the arrows i -> i+1"));
            }
            let mut stage = k - 1;
            while stage > 0 && is_iso(next[stage - 1].expect("arrow present")) {
                stage -= 1;
            }
            if k > 1 && stage == k - 1 {
                return Err(Error::limit("colimit not representable in finite engine: the sequence has not stabilized"));
            }
            Ok(stage)
        }
    }
}

/// Filtered colimit of π*-structures, after checking the transition maps.
pub fn colimit_structures<W: World>(
    d: &Diagram<PiStructure<W>, PiMorphism<W>>,
    shape: IndexShape,
) -> Result<Colimit<PiStructure<W>>> {
    for (i, j, m) in &d.arrows {
        if let Some(why) = m.defect(&d.objects[*i], &d.objects[*j]) {
            return Err(Error::invalid(format!("transition {i} -> {j}: {why}")));
        }
    }
    let stage = colimit_stage(d, shape, |m| m.is_iso())?;
    Ok(Colimit { value: d.objects[stage].clone(), stage })
}

/// Filtered colimit of long homotopy sequences, after checking the transition maps.
pub fn colimit_sequences<W: World>(
    d: &Diagram<LongHtpySequence<W>, SequenceMorphism<W>>,
    shape: IndexShape,
) -> Result<Colimit<LongHtpySequence<W>>> {
    for (i, j, m) in &d.arrows {
        if let Some(why) = m.defect(&d.objects[*i], &d.objects[*j]) {
            return Err(Error::invalid(format!("transition {i} -> {j}: {why}")));
        }
    }
    let stage = colimit_stage(d, shape, |m| m.is_iso())?;
    Ok(Colimit { value: d.objects[stage].clone(), stage })
}
