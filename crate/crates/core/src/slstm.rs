//! Saturated LSTM: the LSTM recurrence with step activations, run as a discrete automaton.
//!
//! ```text
//! f_t = 1+(W^f x_t + U^f h_{t-1})      c_t = f_t ⊙ c_{t-1} + i_t ⊙ c̃_t
//! i_t = 1+(W^i x_t + U^i h_{t-1})      h_t = o_t ⊙ c_t
//! o_t = 1+(W^o x_t + U^o h_{t-1})      y_t = 1+(w^y · h_t + b^y)
//! c̃_t = sgn(W^c x_t + U^c h_{t-1})
//! ```
//!
//! `1+(v)` is 1 for `v > 0` and 0 otherwise; `sgn(v)` is 1 for `v > 0` and -1
//! otherwise, so both send 0 to their low value. All arithmetic is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::Alphabet;

pub type Rational = BigRational;

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn step_plus(v: &Rational) -> Rational {
    if v.is_positive() {
        Rational::one()
    } else {
        Rational::zero()
    }
}

fn sgn(v: &Rational) -> Rational {
    if v.is_positive() {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::InvalidMachine(format!(
                "matrix row of length {} where {cols} columns are expected",
                bad.len()
            )));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
            cols,
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Input and recurrent weights of one gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gate {
    pub w: Matrix,
    pub u: Matrix,
}

impl Gate {
    fn preactivation(&self, x: &[Rational], h: &[Rational]) -> Vec<Rational> {
        self.w
            .mul_vec(x)
            .into_iter()
            .zip(self.u.mul_vec(h))
            .map(|(a, b)| a + b)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatedLstm {
    alphabet: Alphabet,
    embeddings: Vec<Vec<Rational>>,
    forget: Gate,
    input: Gate,
    output: Gate,
    cell: Gate,
    w_y: Vec<Rational>,
    b_y: Rational,
}

/// Cell and hidden vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LstmState {
    pub c: Vec<Rational>,
    pub h: Vec<Rational>,
}

impl LstmState {
    pub fn zeros(hidden: usize) -> Self {
        Self {
            c: vec![Rational::zero(); hidden],
            h: vec![Rational::zero(); hidden],
        }
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().chain(&self.h).all(Rational::is_integer)
    }
}

/// Gate activations computed during one step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateValues {
    pub f: Vec<Rational>,
    pub i: Vec<Rational>,
    pub o: Vec<Rational>,
    pub c_tilde: Vec<Rational>,
}

impl GateValues {
    /// Every gate in `{0, 1}` and every candidate in `{-1, 1}`.
    pub fn is_saturated(&self) -> bool {
        let binary = |v: &Rational| v.is_zero() || v.is_one();
        self.f.iter().chain(&self.i).chain(&self.o).all(binary)
            && self.c_tilde.iter().all(|v| v.abs().is_one())
    }
}

impl SaturatedLstm {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alphabet: Alphabet,
        embeddings: Vec<Vec<Rational>>,
        forget: Gate,
        input: Gate,
        output: Gate,
        cell: Gate,
        w_y: Vec<Rational>,
        b_y: Rational,
    ) -> Result<Self> {
        let d = embeddings.first().map_or(0, Vec::len);
        let h = w_y.len();
        if embeddings.len() != alphabet.len() {
            return Err(Error::InvalidMachine(format!(
                "{} embeddings for {} symbols",
                embeddings.len(),
                alphabet.len()
            )));
        }
        if embeddings.iter().any(|e| e.len() != d) {
            return Err(Error::InvalidMachine("embeddings differ in length".into()));
        }
        for (name, g) in [("f", &forget), ("i", &input), ("o", &output), ("c", &cell)] {
            if (g.w.rows, g.w.cols, g.u.rows, g.u.cols) != (h, d, h, h) {
                return Err(Error::InvalidMachine(format!(
                    "gate {name} has W {}x{} and U {}x{}; expected {h}x{d} and {h}x{h}",
                    g.w.rows, g.w.cols, g.u.rows, g.u.cols
                )));
            }
        }
        Ok(Self {
            alphabet,
            embeddings,
            forget,
            input,
            output,
            cell,
            w_y,
            b_y,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn input_dim(&self) -> usize {
        self.embeddings.first().map_or(0, Vec::len)
    }

    pub fn hidden_dim(&self) -> usize {
        self.w_y.len()
    }

    pub fn initial(&self) -> LstmState {
        LstmState::zeros(self.hidden_dim())
    }

    /// The acceptance bit `y` for a state.
    pub fn output(&self, state: &LstmState) -> bool {
        step_plus(&(dot(&self.w_y, &state.h) + &self.b_y)).is_one()
    }

    /// One step, also returning the gate activations.
    pub fn step_detailed(
        &self,
        state: &LstmState,
        symbol: usize,
    ) -> Result<(LstmState, GateValues)> {
        let x = self
            .embeddings
            .get(symbol)
            .ok_or_else(|| Error::UnknownSymbol(format!("#{symbol}")))?;
        let h = &state.h;
        let gates = GateValues {
            f: self
                .forget
                .preactivation(x, h)
                .iter()
                .map(step_plus)
                .collect(),
            i: self
                .input
                .preactivation(x, h)
                .iter()
                .map(step_plus)
                .collect(),
            o: self
                .output
                .preactivation(x, h)
                .iter()
                .map(step_plus)
                .collect(),
            c_tilde: self.cell.preactivation(x, h).iter().map(sgn).collect(),
        };
        let c: Vec<Rational> = (0..self.hidden_dim())
            .map(|j| &gates.f[j] * &state.c[j] + &gates.i[j] * &gates.c_tilde[j])
            .collect();
        let h = c.iter().zip(&gates.o).map(|(c, o)| c * o).collect();
        Ok((LstmState { c, h }, gates))
    }

    /// States after each prefix of `word`, starting from the zero state.
    pub fn run_trace(&self, word: &[usize]) -> Result<Vec<LstmState>> {
        let mut states = vec![self.initial()];
        for &s in word {
            let (next, _) = self.step_detailed(states.last().expect("nonempty"), s)?;
            states.push(next);
        }
        Ok(states)
    }
}

pub fn lstm_step(net: &SaturatedLstm, state: &LstmState, symbol: usize) -> Result<LstmState> {
    net.step_detailed(state, symbol).map(|(s, _)| s)
}

/// Runs from the zero state and reads `y` after the last token.
pub fn lstm_accepts(net: &SaturatedLstm, word: &[usize]) -> Result<bool> {
    let mut state = net.initial();
    for &s in word {
        state = lstm_step(net, &state, s)?;
    }
    Ok(net.output(&state))
}

/// A five-cell network over `{a, b}` recognizing `a^n b^n`.
///
/// The input is `x = (1, [a], [b])` and every output gate is open, so `h = c`.
///
/// * cell 0 counts `#a - #b`: forget and input gates open, `c̃ = sgn([a] - [b])`
/// * cell 1 is `[c0 < 0]` after the step: `f = 0`, `c̃ = 1`, `i = 1+(-h0 - [a] + [b])`
/// * cell 2 is `[c0 > 0]` after the step, symmetric to cell 1
/// * cell 4 latches once a `b` has been read: `i = 1+([b] - h4)`
/// * cell 3 counts `a`s read after a `b`: `i = 1+([a] + h4 - 1)`
///
/// `y = 1+(1 - h1 - h2 - h3)` accepts iff the count is zero and no `a`
/// followed a `b`. Cells 1 to 3 are never negative, so each threshold test
/// sees a sum of non-negative terms.
pub fn counting_lstm() -> SaturatedLstm {
    let rows = |r: &[&[i64]]| Matrix::from_ints(r);
    let zero_u = Matrix::zeros(5, 5);
    let forget = Gate {
        w: rows(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0], &[1, 0, 0], &[1, 0, 0]]),
        u: zero_u.clone(),
    };
    let input = Gate {
        w: rows(&[
            &[1, 0, 0],
            &[0, -1, 1],
            &[0, 1, -1],
            &[-1, 1, 0],
            &[0, 0, 1],
        ]),
        u: rows(&[
            &[0, 0, 0, 0, 0],
            &[-1, 0, 0, 0, 0],
            &[1, 0, 0, 0, 0],
            &[0, 0, 0, 0, 1],
            &[0, 0, 0, 0, -1],
        ]),
    };
    let output = Gate {
        w: rows(&[&[1, 0, 0], &[1, 0, 0], &[1, 0, 0], &[1, 0, 0], &[1, 0, 0]]),
        u: zero_u.clone(),
    };
    let cell = Gate {
        w: rows(&[&[0, 1, -1], &[1, 0, 0], &[1, 0, 0], &[1, 0, 0], &[1, 0, 0]]),
        u: zero_u,
    };
    SaturatedLstm::new(
        Alphabet::from_chars("ab").expect("static alphabet"),
        vec![vec![int(1), int(1), int(0)], vec![int(1), int(0), int(1)]],
        forget,
        input,
        output,
        cell,
        [0, -1, -1, -1, 0].into_iter().map(int).collect(),
        int(1),
    )
    .expect("counting network is well formed")
}

/// A rational as `[numerator, denominator]`, or a bare integer.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RationalRepr {
    Integer(i64),
    Fraction([i64; 2]),
}

impl RationalRepr {
    fn to_rational(&self) -> Result<Rational> {
        match *self {
            RationalRepr::Integer(n) => Ok(int(n)),
            RationalRepr::Fraction([_, 0]) => {
                Err(Error::Load("rational with zero denominator".into()))
            }
            RationalRepr::Fraction([n, d]) => Ok(Rational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_rational(r: &Rational) -> Result<Self> {
        let n = r.numer().to_i64();
        let d = r.denom().to_i64();
        match (n, d) {
            (Some(n), Some(d)) => Ok(RationalRepr::Fraction([n, d])),
            _ => Err(Error::Resource(format!(
                "weight {r} does not fit in 64 bits"
            ))),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateFile {
    w: Vec<Vec<RationalRepr>>,
    u: Vec<Vec<RationalRepr>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightsFile {
    input_dim: usize,
    hidden_dim: usize,
    alphabet: Vec<String>,
    embeddings: Vec<Vec<RationalRepr>>,
    forget: GateFile,
    input: GateFile,
    output: GateFile,
    cell: GateFile,
    w_y: Vec<RationalRepr>,
    b_y: RationalRepr,
}

fn vector(v: &[RationalRepr]) -> Result<Vec<Rational>> {
    v.iter().map(RationalRepr::to_rational).collect()
}

fn matrix(m: &[Vec<RationalRepr>], cols: usize) -> Result<Matrix> {
    Matrix::from_rows(m.iter().map(|r| vector(r)).collect::<Result<_>>()?, cols)
}

fn repr_vector(v: &[Rational]) -> Result<Vec<RationalRepr>> {
    v.iter().map(RationalRepr::from_rational).collect()
}

fn repr_matrix(m: &Matrix) -> Result<Vec<Vec<RationalRepr>>> {
    (0..m.rows).map(|r| repr_vector(m.row(r))).collect()
}

/// Parses a weights file: dimensions, alphabet, embeddings, four gates and the output layer.
pub fn load_lstm(json: &str) -> Result<SaturatedLstm> {
    let file: WeightsFile = serde_json::from_str(json).map_err(|e| Error::Load(e.to_string()))?;
    let (d, h) = (file.input_dim, file.hidden_dim);
    let gate = |g: &GateFile| -> Result<Gate> {
        Ok(Gate {
            w: matrix(&g.w, d)?,
            u: matrix(&g.u, h)?,
        })
    };
    let embeddings: Vec<Vec<Rational>> = file
        .embeddings
        .iter()
        .map(|e| vector(e))
        .collect::<Result<_>>()?;
    if embeddings.iter().any(|e| e.len() != d) {
        return Err(Error::InvalidMachine(format!(
            "embeddings must have length {d}"
        )));
    }
    let w_y = vector(&file.w_y)?;
    if w_y.len() != h {
        return Err(Error::InvalidMachine(format!("w_y must have length {h}")));
    }
    SaturatedLstm::new(
        Alphabet::new(file.alphabet)?,
        embeddings,
        gate(&file.forget)?,
        gate(&file.input)?,
        gate(&file.output)?,
        gate(&file.cell)?,
        w_y,
        file.b_y.to_rational()?,
    )
}

pub fn save_lstm(net: &SaturatedLstm) -> Result<String> {
    let gate = |g: &Gate| -> Result<GateFile> {
        Ok(GateFile {
            w: repr_matrix(&g.w)?,
            u: repr_matrix(&g.u)?,
        })
    };
    let file = WeightsFile {
        input_dim: net.input_dim(),
        hidden_dim: net.hidden_dim(),
        alphabet: net.alphabet.symbols().to_vec(),
        embeddings: net
            .embeddings
            .iter()
            .map(|e| repr_vector(e))
            .collect::<Result<_>>()?,
        forget: gate(&net.forget)?,
        input: gate(&net.input)?,
        output: gate(&net.output)?,
        cell: gate(&net.cell)?,
        w_y: repr_vector(&net.w_y)?,
        b_y: RationalRepr::from_rational(&net.b_y)?,
    };
    Ok(serde_json::to_string_pretty(&file).expect("weights serialize"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{check_against, DEFAULT_MAX_WORDS};
    use crate::languages::fig1_machine;

    fn with_count(net: &SaturatedLstm, n: i64) -> LstmState {
        let mut s = net.initial();
        s.c[0] = int(n);
        s.h[0] = int(n);
        s
    }

    #[test]
    fn activations_at_zero() {
        assert!(step_plus(&Rational::zero()).is_zero());
        assert_eq!(sgn(&Rational::zero()), -Rational::one());
        assert!(step_plus(&Rational::new(1.into(), 3.into())).is_one());
    }

    #[test]
    fn zero_weights_stay_at_zero() {
        let h = 2;
        let g = Gate {
            w: Matrix::zeros(h, 1),
            u: Matrix::zeros(h, h),
        };
        let net = SaturatedLstm::new(
            Alphabet::from_chars("a").unwrap(),
            vec![vec![int(1)]],
            g.clone(),
            g.clone(),
            g.clone(),
            g,
            vec![int(0); h],
            int(0),
        )
        .unwrap();
        let s = lstm_step(&net, &net.initial(), 0).unwrap();
        assert_eq!(s, net.initial());
        assert!(!lstm_accepts(&net, &[]).unwrap());
    }

    #[test]
    fn counting_cell_moves_by_one() {
        let net = counting_lstm();
        let s = lstm_step(&net, &with_count(&net, 3), 0).unwrap();
        assert_eq!(s.c[0], int(4));
        let s = lstm_step(&net, &with_count(&net, 4), 1).unwrap();
        assert_eq!(s.c[0], int(3));
    }

    #[test]
    fn counting_net_language() {
        let net = counting_lstm();
        let enc = |w: &str| net.alphabet().encode_chars(w).unwrap();
        assert!(lstm_accepts(&net, &enc("aabb")).unwrap());
        assert!(!lstm_accepts(&net, &enc("aab")).unwrap());
        assert!(lstm_accepts(&net, &[]).unwrap());
        assert!(!lstm_accepts(&net, &enc("abab")).unwrap());
        assert!(lstm_step(&net, &net.initial(), 2).is_err());
        let fig1 = fig1_machine();
        let report = check_against(&fig1, 10, DEFAULT_MAX_WORDS, |w| {
            lstm_accepts(&net, w).unwrap()
        })
        .unwrap();
        assert!(report.agrees(), "{:?}", report.counterexamples);
    }

    #[test]
    fn gates_saturate_and_counter_tracks_balance() {
        let net = counting_lstm();
        let fig1 = fig1_machine();
        let w = net.alphabet().encode_chars("aaabbab").unwrap();
        let mut state = net.initial();
        for (t, &s) in w.iter().enumerate() {
            let (next, gates) = net.step_detailed(&state, s).unwrap();
            assert!(gates.is_saturated());
            assert_eq!(
                next.h,
                next.c
                    .iter()
                    .zip(&gates.o)
                    .map(|(c, o)| c * o)
                    .collect::<Vec<_>>()
            );
            state = next;
            assert!(state.is_integral());
            if t < 5 {
                let counter = fig1.run(&w[..=t]).unwrap().counters[0];
                assert_eq!(state.c[0], int(counter));
            }
        }
    }

    #[test]
    fn weights_round_trip() {
        let net = counting_lstm();
        let json = save_lstm(&net).unwrap();
        assert_eq!(load_lstm(&json).unwrap(), net);
        let half = json.replacen("[\n        1,\n        1\n      ]", "[1, 2]", 1);
        assert_ne!(load_lstm(&half).unwrap(), net);
    }

    #[test]
    fn malformed_weights() {
        let json = save_lstm(&counting_lstm()).unwrap();
        let bad = json.replacen("\"b_y\": [\n    1,\n    1\n  ]", "\"b_y\": [1, 0]", 1);
        assert_ne!(bad, json);
        assert!(matches!(load_lstm(&bad), Err(Error::Load(_))));
        let junk = json.replacen("\"b_y\": [\n    1,\n    1\n  ]", "\"b_y\": \"x\"", 1);
        assert!(matches!(load_lstm(&junk), Err(Error::Load(_))));
        let short = json.replacen("\"input_dim\": 3", "\"input_dim\": 2", 1);
        assert!(matches!(load_lstm(&short), Err(Error::InvalidMachine(_))));
    }
}
