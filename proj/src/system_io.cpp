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

#include "fxv/system_io.hpp"

#include "fxv/error.hpp"

#include <fstream>

namespace fxv {

using nlohmann::json;

namespace {

json const &field(json const &doc, char const *name)
{
  auto it = doc.find(name);
  if (it == doc.end())
  {
    throw MalformedDocument(std::string("system description lacks field \"") + name + "\"");
  }
  return *it;
}

std::vector<double> number_list(json const &doc, char const *name)
{
  json const &value = field(doc, name);
  if (!value.is_array() || value.empty())
  {
    throw MalformedDocument(std::string("\"") + name + "\" must be a non-empty array of numbers");
  }
  std::vector<double> out;
  for (auto const &v : value)
  {
    if (!v.is_number())
    {
      throw MalformedDocument(std::string("\"") + name + "\" contains a non-number");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::MatrixXd matrix(json const &doc, char const *name)
{
  json const &value = field(doc, name);
  if (!value.is_array() || value.empty() || !value.front().is_array())
  {
    throw MalformedDocument(std::string("\"") + name + "\" must be an array of rows");
  }
  auto const      rows = value.size();
  auto const      cols = value.front().size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
  {
    json const &row = value[i];
    if (!row.is_array() || row.size() != cols)
    {
      throw MalformedDocument(std::string("\"") + name + "\" has ragged rows");
    }
    for (std::size_t j = 0; j < cols; ++j)
    {
      if (!row[j].is_number())
      {
        throw MalformedDocument(std::string("\"") + name + "\" contains a non-number");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j].get<double>();
    }
  }
  return m;
}

double sample_time(json const &doc)
{
  auto it = doc.find("ts");
  if (it == doc.end())
  {
    return 1.0;
  }
  if (!it->is_number())
  {
    throw MalformedDocument("\"ts\" must be a number");
  }
  return it->get<double>();
}

void expect_type(json const &doc, std::string const &type)
{
  auto it = doc.find("type");
  if (it != doc.end() && *it != type)
  {
    throw MalformedDocument("expected a \"" + type + "\" system, got " + it->dump());
  }
}

TransferFunction parse_tf(json const &doc)
{
  expect_type(doc, "tf");
  return TransferFunction(Polynomial(number_list(doc, "num")), Polynomial(number_list(doc, "den")),
                          sample_time(doc));
}

StateSpace parse_ss(json const &doc)
{
  expect_type(doc, "ss");
  return StateSpace(matrix(doc, "A"), matrix(doc, "B"), matrix(doc, "C"), matrix(doc, "D"),
                    sample_time(doc));
}

json matrix_json(Eigen::MatrixXd const &m)
{
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
  {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
    {
      row.push_back(m(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json tf_json(TransferFunction const &tf)
{
  return {{"type", "tf"}, {"num", tf.num().coeffs()}, {"den", tf.den().coeffs()},
          {"ts", tf.sample_time()}};
}

json ss_json(StateSpace const &ss)
{
  return {{"type", "ss"},          {"A", matrix_json(ss.A())}, {"B", matrix_json(ss.B())},
          {"C", matrix_json(ss.C())}, {"D", matrix_json(ss.D())}, {"ts", ss.sample_time()}};
}

}  // namespace

System parse_system(json const &doc)
{
  if (!doc.is_object())
  {
    throw MalformedDocument("system description must be a JSON object");
  }
  json const &type = field(doc, "type");
  if (!type.is_string())
  {
    throw MalformedDocument("\"type\" must be a string");
  }
  std::string const kind = type.get<std::string>();
  if (kind == "tf")
  {
    return parse_tf(doc);
  }
  if (kind == "ss")
  {
    return parse_ss(doc);
  }
  if (kind == "cl-tf")
  {
    // A missing cmode means series; the command line always overrides it.
    std::optional<ConnectionMode> mode = ConnectionMode::series;
    if (auto it = doc.find("cmode"); it != doc.end())
    {
      mode = it->is_string() ? parse_connection_mode(it->get<std::string>()) : std::nullopt;
    }
    if (!mode)
    {
      throw MalformedDocument("\"cmode\" must be \"series\" or \"feedback\"");
    }
    return ClosedLoopTf(parse_tf(field(doc, "controller")), parse_tf(field(doc, "plant")), *mode);
  }
  if (kind == "cl-ss")
  {
    return ClosedLoopSs(parse_ss(field(doc, "plant")), matrix(doc, "K"));
  }
  throw MalformedDocument("unknown system type \"" + kind + "\"");
}

json to_json(System const &system)
{
  struct Visitor
  {
    json operator()(TransferFunction const &tf) const { return tf_json(tf); }
    json operator()(StateSpace const &ss) const { return ss_json(ss); }
    json operator()(ClosedLoopTf const &cl) const
    {
      return {{"type", "cl-tf"},
              {"controller", tf_json(cl.controller)},
              {"plant", tf_json(cl.plant)},
              {"cmode", std::string(to_string(cl.cmode))}};
    }
    json operator()(ClosedLoopSs const &cl) const
    {
      return {{"type", "cl-ss"}, {"plant", ss_json(cl.plant)}, {"K", matrix_json(cl.K)}};
    }
  };
  return std::visit(Visitor{}, system);
}

System load_system(std::filesystem::path const &path, json *raw)
{
  std::ifstream in(path);
  if (!in)
  {
    throw MalformedDocument("cannot read system file " + path.string());
  }
  json doc;
  try
  {
    doc = json::parse(in);
  }
  catch (json::parse_error const &e)
  {
    throw MalformedDocument("system file " + path.string() + " is not valid JSON: " + e.what());
  }
  System system = parse_system(doc);
  if (raw)
  {
    *raw = std::move(doc);
  }
  return system;
}

}  // namespace fxv
