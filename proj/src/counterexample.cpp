// Copyright 2026 The fxverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fxv/counterexample.hpp"

#include "fxv/error.hpp"

#include <array>
#include <fstream>

namespace fxv {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 12> kPropertyNames = {
  "stability",
  "minimum_phase",
  "overflow",
  "limit_cycle",
  "quantization_error",
  "closed_stability",
  "closed_limit_cycle",
  "closed_quantization_error",
  "ss_stability",
  "ss_controllability",
  "ss_observability",
  "ss_quantization_error",
};

json const &field(json const &doc, char const *name)
{
  auto it = doc.find(name);
  if (it == doc.end())
  {
    throw MalformedDocument(std::string("counterexample lacks field \"") + name + "\"");
  }
  return *it;
}

template <class T>
T get(json const &doc, char const *name)
{
  try
  {
    return field(doc, name).get<T>();
  }
  catch (json::exception const &e)
  {
    throw MalformedDocument(std::string("counterexample field \"") + name + "\": " + e.what());
  }
}

json sequence(std::vector<std::int64_t> const &raws, FxFormat const &fmt)
{
  json out = json::array();
  for (std::int64_t raw : raws)
  {
    out.push_back({{"raw", raw}, {"value", fmt.to_real(raw)}});
  }
  return out;
}

std::vector<std::int64_t> parse_sequence(json const &doc, char const *name, FxFormat const &fmt)
{
  json const &seq = field(doc, name);
  if (!seq.is_array())
  {
    throw MalformedDocument(std::string("\"") + name + "\" must be an array");
  }
  std::vector<std::int64_t> out;
  for (auto const &item : seq)
  {
    auto it = item.is_object() ? item.find("raw") : item.end();
    if (it == item.end() || !it->is_number_integer())
    {
      throw MalformedDocument(std::string("\"") + name + "\" entries need an integer \"raw\"");
    }
    bool fits = false;
    std::int64_t raw = 0;
    if (it->is_number_unsigned())
    {
      auto const u = it->get<std::uint64_t>();
      fits         = u <= static_cast<std::uint64_t>(fmt.raw_max());
      raw          = static_cast<std::int64_t>(u);
    }
    else
    {
      raw  = it->get<std::int64_t>();
      fits = fmt.contains_raw(raw);
    }
    if (!fits)
    {
      throw OffGridValue(std::string("\"") + name + "\" holds raw " + it->dump() +
                         " outside the " + std::to_string(fmt.word_bits()) + "-bit word");
    }
    out.push_back(raw);
  }
  return out;
}

json format_json(FxFormat const &fmt)
{
  return {{"int_bits", fmt.int_bits()},
          {"frac_bits", fmt.frac_bits()},
          {"overflow_mode", std::string(to_string(fmt.overflow_mode()))},
          {"rounding", std::string(to_string(fmt.rounding()))},
          {"dyn_min", fmt.dyn_min()},
          {"dyn_max", fmt.dyn_max()}};
}

FxFormat parse_format(json const &doc)
{
  auto overflow = parse_overflow_mode(get<std::string>(doc, "overflow_mode"));
  auto rounding = parse_rounding(get<std::string>(doc, "rounding"));
  if (!overflow || !rounding)
  {
    throw MalformedDocument("unknown overflow mode or rounding in format");
  }
  try
  {
    return FxFormat(get<int>(doc, "int_bits"), get<int>(doc, "frac_bits"), get<double>(doc, "dyn_min"),
                    get<double>(doc, "dyn_max"), *overflow, *rounding);
  }
  catch (InvalidFormat const &e)
  {
    throw MalformedDocument(std::string("invalid format: ") + e.what());
  }
}

json witness_json(AnalyticWitness const &w)
{
  json roots = json::array();
  for (auto const &r : w.roots)
  {
    roots.push_back({r.real(), r.imag()});
  }
  return {{"subject", w.subject},         {"polynomial", w.polynomial}, {"roots", roots},
          {"max_modulus", w.max_modulus}, {"rank", w.rank},             {"dimension", w.dimension}};
}

AnalyticWitness parse_witness(json const &doc)
{
  AnalyticWitness w;
  w.subject     = get<std::string>(doc, "subject");
  w.polynomial  = get<std::vector<double>>(doc, "polynomial");
  w.max_modulus = get<double>(doc, "max_modulus");
  w.rank        = get<int>(doc, "rank");
  w.dimension   = get<int>(doc, "dimension");
  for (auto const &r : field(doc, "roots"))
  {
    if (!r.is_array() || r.size() != 2)
    {
      throw MalformedDocument("witness roots must be [re, im] pairs");
    }
    w.roots.emplace_back(r[0].get<double>(), r[1].get<double>());
  }
  return w;
}

}  // namespace

std::string_view to_string(Property property)
{
  return kPropertyNames[static_cast<std::size_t>(property)];
}

std::optional<Property> parse_property(std::string_view text)
{
  for (std::size_t i = 0; i < kPropertyNames.size(); ++i)
  {
    if (kPropertyNames[i] == text)
    {
      return static_cast<Property>(i);
    }
  }
  return std::nullopt;
}

bool is_bounded(Property property) noexcept
{
  switch (property)
  {
  case Property::overflow:
  case Property::limit_cycle:
  case Property::quantization_error:
  case Property::closed_limit_cycle:
  case Property::closed_quantization_error:
  case Property::ss_quantization_error:
    return true;
  default:
    return false;
  }
}

std::string_view verdict_banner(Status status)
{
  return status == Status::successful ? "VERIFICATION SUCCESSFUL" : "VERIFICATION FAILED";
}

json serialize(Counterexample const &ce)
{
  json realization = {{"form", std::string(to_string(ce.realization.form))},
                      {"delta", ce.realization.delta ? json(*ce.realization.delta) : json(nullptr)}};
  json violation   = {{"step", ce.violation.step ? json(*ce.violation.step) : json(nullptr)},
                      {"node", ce.violation.node},
                      {"kind", ce.violation.kind}};
  json doc         = {
    {"schema", kCounterexampleSchema},
    {"property", std::string(to_string(ce.property))},
    {"system", ce.system},
    {"format", format_json(ce.format)},
    {"realization", realization},
    {"bound", ce.bound},
    {"error_bound", ce.error_bound ? json(*ce.error_bound) : json(nullptr)},
    {"channels", {{"inputs", ce.input_channels}, {"outputs", ce.output_channels}}},
    {"inputs", sequence(ce.inputs, ce.format)},
    {"initial_states", sequence(ce.initial_states, ce.format)},
    {"outputs", sequence(ce.outputs, ce.format)},
    {"violation", violation},
    {"engine",
     {{"mode", ce.engine.mode},
      {"seed", ce.engine.seed},
      {"grid", ce.engine.grid},
      {"count_saturation", ce.engine.count_saturation}}},
  };
  if (ce.witness)
  {
    doc["witness"] = witness_json(*ce.witness);
  }
  return doc;
}

Counterexample deserialize(json const &doc)
{
  if (!doc.is_object())
  {
    throw MalformedDocument("counterexample must be a JSON object");
  }
  auto const schema = get<std::string>(doc, "schema");
  if (schema != kCounterexampleSchema)
  {
    throw VersionMismatch("unsupported counterexample schema \"" + schema + "\", expected \"" +
                          kCounterexampleSchema + "\"");
  }
  Counterexample ce;
  auto property = parse_property(get<std::string>(doc, "property"));
  if (!property)
  {
    throw MalformedDocument("unknown property in counterexample");
  }
  ce.property = *property;
  ce.system   = field(doc, "system");
  ce.format   = parse_format(field(doc, "format"));

  json const &real = field(doc, "realization");
  auto form = parse_form(get<std::string>(real, "form"));
  if (!form)
  {
    throw MalformedDocument("unknown realization form in counterexample");
  }
  ce.realization.form = *form;
  if (!field(real, "delta").is_null())
  {
    ce.realization.delta = get<double>(real, "delta");
  }

  ce.bound = get<std::size_t>(doc, "bound");
  if (auto it = doc.find("error_bound"); it != doc.end() && !it->is_null())
  {
    ce.error_bound = get<double>(doc, "error_bound");
  }
  if (auto it = doc.find("channels"); it != doc.end())
  {
    ce.input_channels  = get<std::size_t>(*it, "inputs");
    ce.output_channels = get<std::size_t>(*it, "outputs");
  }
  ce.inputs         = parse_sequence(doc, "inputs", ce.format);
  ce.initial_states = parse_sequence(doc, "initial_states", ce.format);
  ce.outputs        = parse_sequence(doc, "outputs", ce.format);

  json const &violation = field(doc, "violation");
  if (!field(violation, "step").is_null())
  {
    ce.violation.step = get<std::size_t>(violation, "step");
  }
  ce.violation.node = get<std::string>(violation, "node");
  ce.violation.kind = get<std::string>(violation, "kind");

  json const &engine         = field(doc, "engine");
  ce.engine.mode             = get<std::string>(engine, "mode");
  ce.engine.seed             = get<std::uint64_t>(engine, "seed");
  ce.engine.grid             = get<double>(engine, "grid");
  if (auto it = engine.find("count_saturation"); it != engine.end())
  {
    ce.engine.count_saturation = get<bool>(engine, "count_saturation");
  }

  if (auto it = doc.find("witness"); it != doc.end() && !it->is_null())
  {
    ce.witness = parse_witness(*it);
  }

  if (ce.input_channels == 0 || ce.output_channels == 0 ||
      ce.inputs.size() % ce.input_channels != 0 || ce.outputs.size() % ce.output_channels != 0)
  {
    throw MalformedDocument("sequence lengths do not match the channel counts");
  }
  if (is_bounded(ce.property))
  {
    if (!ce.violation.step)
    {
      throw MalformedDocument("bounded counterexample lacks a violation step");
    }
    if (ce.steps() > ce.bound || *ce.violation.step >= ce.outputs.size() / ce.output_channels)
    {
      throw MalformedDocument("violation step or input length inconsistent with the bound");
    }
  }
  else if (!ce.witness)
  {
    throw MalformedDocument("counterexample for a k-free property lacks a witness");
  }
  return ce;
}

void write_counterexample(std::filesystem::path const &path, Counterexample const &ce)
{
  std::ofstream out(path);
  if (!out)
  {
    throw Error("cannot write counterexample file " + path.string());
  }
  out << serialize(ce).dump(2) << "\n";
}

Counterexample read_counterexample(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw MalformedDocument("cannot read counterexample file " + path.string());
  }
  try
  {
    return deserialize(json::parse(in));
  }
  catch (json::parse_error const &e)
  {
    throw MalformedDocument("counterexample file is not valid JSON: " + std::string(e.what()));
  }
}

}  // namespace fxv
