//! Output bit of a small combinational circuit with fixed inputs.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use super::common::info;
use super::{Task, Verdict};
use crate::env::Rendered;
use crate::grammar::last_int;
use crate::protocol::{Category, DifficultyTable, Params, ParamsExt};
use crate::registry::EnvInfo;
use crate::render::{RasterImage, Role, Style};
use crate::rng::StreamRng;

pub const MAX_DEPTH: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    And,
    Or,
    Xor,
    Not,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::And => "AND",
            Op::Or => "OR",
            Op::Xor => "XOR",
            Op::Not => "NOT",
        }
    }
}

/// Wire source: an input bit or the output of an earlier gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Wire {
    Input(usize),
    Gate(usize),
}

impl Wire {
    fn label(self) -> String {
        match self {
            Wire::Input(i) => format!("x{i}"),
            Wire::Gate(g) => format!("G{g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gate {
    pub op: Op,
    /// One wire for `Not`, two otherwise.
    pub ins: Vec<Wire>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub inputs: Vec<bool>,
    /// Topologically ordered; the last gate drives the output.
    pub gates: Vec<Gate>,
}

pub struct CircuitLogic;

pub fn evaluate(c: &Circuit) -> bool {
    let mut val: Vec<bool> = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        let get = |w: Wire| match w {
            Wire::Input(i) => c.inputs[i],
            Wire::Gate(j) => val[j],
        };
        let v = match g.op {
            Op::Not => !get(g.ins[0]),
            Op::And => get(g.ins[0]) && get(g.ins[1]),
            Op::Or => get(g.ins[0]) || get(g.ins[1]),
            Op::Xor => get(g.ins[0]) ^ get(g.ins[1]),
        };
        val.push(v);
    }
    val.last().copied().unwrap_or(false)
}

/// Column of every gate in the drawing: inputs sit in column 0.
pub fn depths(c: &Circuit) -> Vec<usize> {
    let mut d: Vec<usize> = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        let m = g
            .ins
            .iter()
            .map(|w| match *w {
                Wire::Input(_) => 0,
                Wire::Gate(j) => d[j],
            })
            .max()
            .unwrap_or(0);
        d.push(m + 1);
    }
    d
}

/// Gate counts per layer, last layer a single output gate. A layer never
/// holds more than twice the next one, so the next layer can consume it.
fn layer_sizes(n_g: usize, rng: &mut StreamRng) -> Option<Vec<usize>> {
    let mut min_layers = 1;
    while (1usize << min_layers) - 1 < n_g {
        min_layers += 1;
    }
    let max_layers = MAX_DEPTH.min(n_g);
    if min_layers > max_layers {
        return None;
    }
    let d = rng.gen_range(min_layers..=max_layers);
    let mut sizes = vec![1usize; d];
    for _ in d..n_g {
        let open: Vec<usize> = (0..d - 1).filter(|&k| sizes[k] < 2 * sizes[k + 1]).collect();
        if open.is_empty() {
            return None;
        }
        sizes[open[rng.gen_range(0..open.len())]] += 1;
    }
    Some(sizes)
}

/// Wires layer by layer: every gate of layer k is an operand of some gate in
/// layer k + 1; free operand slots draw from inputs and earlier layers.
fn wire_layers(sizes: &[usize], n_in: usize, rng: &mut StreamRng) -> Vec<Gate> {
    let mut start = Vec::with_capacity(sizes.len());
    let mut acc = 0;
    for &s in sizes {
        start.push(acc);
        acc += s;
    }
    let mut gates = Vec::with_capacity(acc);
    for (k, &size) in sizes.iter().enumerate() {
        let mut assigned: Vec<Vec<Wire>> = vec![Vec::new(); size];
        if k > 0 {
            let mut producers: Vec<usize> = (start[k - 1]..start[k]).collect();
            producers.shuffle(rng);
            let mut order: Vec<usize> = (0..size).collect();
            order.shuffle(rng);
            for (i, p) in producers.into_iter().enumerate() {
                assigned[order[i % size]].push(Wire::Gate(p));
            }
        }
        let pool: Vec<Wire> = (0..n_in)
            .map(Wire::Input)
            .chain((0..start[k]).map(Wire::Gate))
            .collect();
        for mut ins in assigned {
            let op = if ins.len() == 2 {
                [Op::And, Op::Or, Op::Xor][rng.gen_range(0..3)]
            } else {
                [Op::And, Op::Or, Op::Xor, Op::Not][rng.gen_range(0..4)]
            };
            let arity = if op == Op::Not { 1 } else { 2 };
            while ins.len() < arity {
                let w = pool[rng.gen_range(0..pool.len())];
                if !ins.contains(&w) {
                    ins.push(w);
                }
            }
            ins.shuffle(rng);
            gates.push(Gate { op, ins });
        }
    }
    gates
}

const COL_W: i64 = 104;
const ROW_H: i64 = 64;
const BOX_W: i64 = 64;
const BOX_H: i64 = 44;
const MARGIN: i64 = 24;

struct Layout {
    width: u32,
    height: u32,
    inputs: Vec<(i64, i64)>,
    gates: Vec<(i64, i64)>,
}

fn layout(c: &Circuit) -> Layout {
    let d = depths(c);
    let cols = d.iter().copied().max().unwrap_or(0) + 1;
    let mut per_col = vec![0i64; cols];
    let inputs: Vec<(i64, i64)> = (0..c.inputs.len())
        .map(|i| {
            per_col[0] += 1;
            (MARGIN + BOX_W / 2, MARGIN + ROW_H * i as i64 + BOX_H / 2)
        })
        .collect();
    let gates: Vec<(i64, i64)> = d
        .iter()
        .map(|&col| {
            let row = per_col[col];
            per_col[col] += 1;
            (
                MARGIN + BOX_W / 2 + COL_W * col as i64,
                MARGIN + ROW_H * row + BOX_H / 2,
            )
        })
        .collect();
    let rows = per_col.iter().copied().max().unwrap_or(1);
    Layout {
        width: (2 * MARGIN + BOX_W + COL_W * (cols as i64 - 1)) as u32,
        height: (2 * MARGIN + ROW_H * (rows - 1) + BOX_H) as u32,
        inputs,
        gates,
    }
}

fn draw_box(img: &mut RasterImage, (x, y): (i64, i64), top: &str, bottom: &str, fill: Role, scale: u32) {
    img.fill_rect(x - BOX_W / 2, y - BOX_H / 2, BOX_W, BOX_H, fill.color());
    img.stroke_rect(x - BOX_W / 2, y - BOX_H / 2, BOX_W, BOX_H, 2, Role::Text.color());
    img.draw_text_centered(x, y - 10, top, scale, Role::Text.color());
    img.draw_text_centered(x, y + 10, bottom, scale, Role::Text.color());
}

impl Task for CircuitLogic {
    type Instance = Circuit;

    fn info() -> EnvInfo {
        info(
            "circuit_logic",
            Category::Logic,
            DifficultyTable::new(
                &["gates"],
                [
                    &[("gates", 4.into()), ("inputs", 3.into())],
                    &[("gates", 8.into()), ("inputs", 4.into())],
                    &[("gates", 12.into()), ("inputs", 5.into())],
                ],
            ),
            "The diagram is a Boolean circuit read left to right. Input boxes show fixed bits; each gate \
             box names its gate (AND, OR, XOR, NOT) and wires connect outputs to inputs. Report the bit \
             produced by the highlighted output gate.",
            "a single bit, 0 or 1",
            "one line per input `xI = B`, one line per gate `GJ = OP(a, b)`, then `output = GK`",
        )
    }

    fn generate(params: &Params, rng: &mut StreamRng) -> Option<Circuit> {
        let n_in = params.int("inputs", 3) as usize;
        let n_g = params.int("gates", 4) as usize;
        if n_in < 2 || n_g == 0 {
            return None;
        }
        let inputs: Vec<bool> = (0..n_in).map(|_| rng.gen()).collect();
        let sizes = layer_sizes(n_g, rng)?;
        let gates = wire_layers(&sizes, n_in, rng);
        let c = Circuit { inputs, gates };
        let shallow = depths(&c).into_iter().all(|d| d <= MAX_DEPTH);
        // every gate except the last must feed some later gate
        let used = (0..n_g - 1).all(|j| c.gates[j + 1..].iter().any(|g| g.ins.contains(&Wire::Gate(j))));
        let l = layout(&c);
        let fits = l.width <= crate::render::MAX_DIM && l.height <= crate::render::MAX_DIM;
        (shallow && used && fits).then_some(c)
    }

    fn solve(c: &Circuit) -> String {
        u8::from(evaluate(c)).to_string()
    }

    fn verify(c: &Circuit, answer: &str) -> Verdict {
        Verdict::integer(last_int(answer), i64::from(evaluate(c)))
    }

    fn question(c: &Circuit) -> String {
        format!(
            "Evaluate the circuit in the image. It has {} fixed input bits and {} gates; the output is \
             gate G{}, drawn highlighted. What bit does it produce? Answer 0 or 1.",
            c.inputs.len(),
            c.gates.len(),
            c.gates.len().saturating_sub(1)
        )
    }

    fn caption(c: &Circuit) -> String {
        let mut lines: Vec<String> = c
            .inputs
            .iter()
            .enumerate()
            .map(|(i, &b)| format!("x{i} = {}", u8::from(b)))
            .collect();
        for (j, g) in c.gates.iter().enumerate() {
            let args: Vec<String> = g.ins.iter().map(|w| w.label()).collect();
            lines.push(format!("G{j} = {}({})", g.op.name(), args.join(", ")));
        }
        lines.push(format!("output = G{}", c.gates.len().saturating_sub(1)));
        lines.join("\n")
    }

    fn render(c: &Circuit, _rng: &mut StreamRng) -> Rendered {
        let l = layout(c);
        let scale = Style::default().font_scale;
        let mut img = RasterImage::new(l.width, l.height, Role::Background.color());
        let wire = Role::Edge.color();
        for (j, g) in c.gates.iter().enumerate() {
            let (gx, gy) = l.gates[j];
            let k = g.ins.len() as i64;
            for (slot, w) in g.ins.iter().enumerate() {
                let (sx, sy) = match *w {
                    Wire::Input(i) => l.inputs[i],
                    Wire::Gate(i) => l.gates[i],
                };
                // distinct entry points on the gate's left edge
                let ey = gy - BOX_H / 4 + (BOX_H / 2) * slot as i64 / (k.max(2) - 1);
                let ey = if k == 1 { gy } else { ey };
                img.draw_line(sx + BOX_W / 2, sy, gx - BOX_W / 2, ey, 2, wire);
            }
        }
        for (i, &b) in c.inputs.iter().enumerate() {
            draw_box(
                &mut img,
                l.inputs[i],
                &format!("x{i}"),
                &format!("{}", u8::from(b)),
                Role::Node,
                scale,
            );
        }
        let last = c.gates.len().saturating_sub(1);
        for (j, g) in c.gates.iter().enumerate() {
            let fill = if j == last { Role::Highlight } else { Role::Background };
            draw_box(&mut img, l.gates[j], &format!("G{j}"), g.op.name(), fill, scale);
        }
        Rendered::image(img)
    }

    fn random_answer(_c: &Circuit, rng: &mut dyn RngCore) -> String {
        u8::from(rng.gen_bool(0.5)).to_string()
    }
}
