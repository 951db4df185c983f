use super::{Field, Mat, Scalar};

/// Incrementally built subspace of F^n kept in fully reduced echelon form.
///
/// When `track` is on, every stored row remembers its expression in terms of
/// the vectors passed to `insert`, so `coordinates` can write a member of the
/// span as a combination of the inserted generators.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    width: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    track: bool,
    combos: Vec<Vec<Scalar>>,
    inserted: usize,
}

impl Echelon {
    pub fn new(field: Field, width: usize) -> Echelon {
        Echelon { field, width, rows: Vec::new(), pivots: Vec::new(), track: false, combos: Vec::new(), inserted: 0 }
    }

    pub fn tracking(field: Field, width: usize) -> Echelon {
        Echelon { track: true, ..Echelon::new(field, width) }
    }

    pub fn from_vectors(field: Field, width: usize, vs: &[Vec<Scalar>]) -> Echelon {
        let mut e = Echelon::new(field, width);
        for v in vs {
            e.insert(v);
        }
        e
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces v modulo the span; returns the residual and, when tracking,
    /// the combination of generators that was subtracted.
    fn reduce_with(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
        let mut r = v.to_vec();
        let mut used = if self.track { self.field.zeros(self.inserted) } else { Vec::new() };
        for (row, (&pc, combo)) in self.rows.iter().zip(self.pivots.iter().zip(self.combos_iter())) {
            let f = r[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
            if let Some(c) = combo {
                for (u, y) in used.iter_mut().zip(c) {
                    if !y.is_zero() {
                        *u += &(&f * y);
                    }
                }
            }
        }
        (r, used)
    }

    fn combos_iter(&self) -> Box<dyn Iterator<Item = Option<&Vec<Scalar>>> + '_> {
        if self.track {
            Box::new(self.combos.iter().map(Some))
        } else {
            Box::new(std::iter::repeat(None))
        }
    }

    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.reduce_with(v).0
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds v to the span; returns true if the dimension grew.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.width, "vector width mismatch");
        let gen = self.inserted;
        self.inserted += 1;
        if self.track {
            for c in &mut self.combos {
                c.push(self.field.zero());
            }
        }
        let (mut r, used) = self.reduce_with(v);
        let Some(pc) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[pc].inv().unwrap();
        for x in r.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        // combo for r: (v - used) * inv, expressed in generators
        let combo = if self.track {
            let mut c: Vec<Scalar> = used.iter().map(|u| -(u * &inv)).collect();
            c.resize(self.inserted, self.field.zero());
            c[gen] = inv.clone();
            c
        } else {
            Vec::new()
        };
        for i in 0..self.rows.len() {
            let f = self.rows[i][pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in self.rows[i].iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
            if self.track {
                for (x, y) in self.combos[i].iter_mut().zip(&combo) {
                    if !y.is_zero() {
                        *x -= &(&f * y);
                    }
                }
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, r);
        if self.track {
            self.combos.insert(pos, combo);
        }
        true
    }

    /// Coordinates of v with respect to the stored echelon basis.
    pub fn echelon_coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut check = self.field.zeros(self.width);
        for (c, row) in coords.iter().zip(&self.rows) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in check.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x += &(c * y);
                }
            }
        }
        if check.as_slice() == v {
            Some(coords)
        } else {
            None
        }
    }

    /// Expression of v as a combination of all generators passed to insert
    /// (tracking mode only).
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert!(self.track, "coordinates requires a tracking echelon");
        let (r, used) = self.reduce_with(v);
        if r.iter().all(|x| x.is_zero()) {
            Some(used)
        } else {
            None
        }
    }

    /// Indices of coordinates not used as pivots (a complement basis of
    /// standard vectors).
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut is_p = vec![false; self.width];
        for &p in &self.pivots {
            is_p[p] = true;
        }
        (0..self.width).filter(|&i| !is_p[i]).collect()
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_rows(self.field, self.width, self.rows.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tracking_coordinates() {
        let q = Field::Rationals;
        let g = |v: &[i64]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        let mut e = Echelon::tracking(q, 3);
        assert!(e.insert(&g(&[1, 1, 0])));
        assert!(e.insert(&g(&[0, 1, 1])));
        assert!(!e.insert(&g(&[1, 2, 1])));
        let target = g(&[2, 3, 1]);
        let c = e.coordinates(&target).unwrap();
        let gens = [g(&[1, 1, 0]), g(&[0, 1, 1]), g(&[1, 2, 1])];
        let mut sum = q.zeros(3);
        for (ci, gv) in c.iter().zip(&gens) {
            for (s, x) in sum.iter_mut().zip(gv) {
                *s += &(ci * x);
            }
        }
        assert_eq!(sum, target);
        assert!(e.coordinates(&g(&[0, 0, 1])).is_none());
    }
}
