use std::borrow::Cow;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::GateKind;
use crate::sng::ClockDomain;
use crate::waveform::Waveform;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WireId(pub usize);

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WireSource {
    /// The `n`th external input of the cell.
    Input(usize),
    /// The output of element `n`.
    Element(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Wire {
    pub name: String,
    pub source: WireSource,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Element {
    pub name: String,
    pub kind: GateKind,
    pub inputs: Vec<WireId>,
    pub output: WireId,
}

/// A gate graph in topological order: every element reads only external
/// inputs or outputs of earlier elements.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Netlist {
    wires: Vec<Wire>,
    elements: Vec<Element>,
    inputs: Vec<WireId>,
    output: WireId,
}

#[derive(Clone, Debug, Default)]
pub struct NetlistBuilder {
    wires: Vec<Wire>,
    elements: Vec<Element>,
    inputs: Vec<WireId>,
}

impl NetlistBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn input(&mut self, name: impl Into<String>) -> WireId {
        let id = WireId(self.wires.len());
        self.wires.push(Wire {
            name: name.into(),
            source: WireSource::Input(self.inputs.len()),
        });
        self.inputs.push(id);
        id
    }

    pub fn gate(&mut self, name: impl Into<String>, kind: GateKind, inputs: &[WireId]) -> Result<WireId> {
        let name = name.into();
        if inputs.len() != kind.arity() {
            return Err(Error::Netlist(format!(
                "{name}: {kind:?} takes {} inputs, got {}",
                kind.arity(),
                inputs.len()
            )));
        }
        if let Some(w) = inputs.iter().find(|w| w.0 >= self.wires.len()) {
            return Err(Error::Netlist(format!("{name}: unknown wire {}", w.0)));
        }
        let output = WireId(self.wires.len());
        self.wires.push(Wire {
            name: name.clone(),
            source: WireSource::Element(self.elements.len()),
        });
        self.elements.push(Element {
            name,
            kind,
            inputs: inputs.to_vec(),
            output,
        });
        Ok(output)
    }

    pub fn finish(self, output: WireId) -> Result<Netlist> {
        if output.0 >= self.wires.len() {
            return Err(Error::Netlist(format!("unknown output wire {}", output.0)));
        }
        Ok(Netlist {
            wires: self.wires,
            elements: self.elements,
            inputs: self.inputs,
            output,
        })
    }
}

impl Netlist {
    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn inputs(&self) -> &[WireId] {
        &self.inputs
    }

    pub fn output(&self) -> WireId {
        self.output
    }

    /// Elements reading `wire`, in topological order.
    pub fn consumers(&self, wire: WireId) -> Vec<usize> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.inputs.contains(&wire))
            .map(|(i, _)| i)
            .collect()
    }

    /// Evaluates the graph with every clocked element bound to `clock`.
    ///
    /// `errors`, when given, holds one optional flip waveform per wire; a wire
    /// with a flip waveform is XORed with it where it is driven, so every
    /// reader sees the same corrupted signal.
    pub fn evaluate(
        &self,
        inputs: &[&Waveform],
        clock: &ClockDomain,
        errors: Option<&[Option<Waveform>]>,
    ) -> Result<Waveform> {
        if inputs.len() != self.inputs.len() {
            return Err(Error::Arity {
                what: "netlist inputs",
                expected: self.inputs.len(),
                got: inputs.len(),
            });
        }
        if let Some(e) = errors {
            if e.len() != self.wires.len() {
                return Err(Error::Arity {
                    what: "per-wire error waveforms",
                    expected: self.wires.len(),
                    got: e.len(),
                });
            }
        }
        fn tap<'a>(errors: Option<&[Option<Waveform>]>, w: WireId, v: Cow<'a, Waveform>) -> Result<Cow<'a, Waveform>> {
            match errors.and_then(|e| e[w.0].as_ref()) {
                Some(err) => Ok(Cow::Owned(v.combine2(err, |a, b| a ^ b)?)),
                None => Ok(v),
            }
        }
        let mut values: Vec<Option<Cow<'_, Waveform>>> = vec![None; self.wires.len()];
        for (&w, &x) in self.inputs.iter().zip(inputs) {
            if x.horizon() != clock.horizon() {
                return Err(Error::HorizonMismatch(clock.horizon(), x.horizon()));
            }
            values[w.0] = Some(tap(errors, w, Cow::Borrowed(x))?);
        }
        for e in &self.elements {
            let args: Vec<&Waveform> = e
                .inputs
                .iter()
                .map(|w| values[w.0].as_deref().expect("topological order"))
                .collect();
            let out = e.kind.eval(&args, clock)?;
            values[e.output.0] = Some(tap(errors, e.output, Cow::Owned(out))?);
        }
        Ok(values[self.output.0]
            .take()
            .expect("output wire driven")
            .into_owned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::Time;

    #[test]
    fn builder_rejects_bad_arity_and_wires() {
        let mut b = NetlistBuilder::new();
        let a = b.input("a");
        assert!(b.gate("g", GateKind::And, &[a]).is_err());
        assert!(b.gate("g", GateKind::Not, &[WireId(7)]).is_err());
        let n = b.gate("n", GateKind::Not, &[a]).unwrap();
        assert!(b.clone().finish(WireId(9)).is_err());
        let net = b.finish(n).unwrap();
        assert_eq!(net.consumers(a), vec![0]);
    }

    #[test]
    fn evaluate_and_tap() {
        let mut b = NetlistBuilder::new();
        let a = b.input("a");
        let c = b.input("c");
        let y = b.gate("and", GateKind::And, &[a, c]).unwrap();
        let net = b.finish(y).unwrap();
        let h = Time::from_ns(10.0);
        let clk = ClockDomain::synchronous(Time::from_ns(1.0), h).unwrap();
        let one = Waveform::constant(true, h);
        let w = Waveform::new(false, vec![Time::from_ns(2.0), Time::from_ns(6.0)], h).unwrap();
        assert_eq!(net.evaluate(&[&one, &w], &clk, None).unwrap(), w);
        let mut errs = vec![None; net.wires().len()];
        errs[y.0] = Some(one.clone());
        assert_eq!(net.evaluate(&[&one, &w], &clk, Some(&errs)).unwrap(), w.not());
        assert!(net.evaluate(&[&one], &clk, None).is_err());
    }
}
