#pragma once

#include <json.hpp>
#include <string>

#include "cantor/capacity.hpp"
#include "cantor/frostman.hpp"
#include "cantor/hausdorff.hpp"
#include "cantor/measure.hpp"
#include "cantor/measures.hpp"
#include "cantor/premeasure.hpp"
#include "cantor/randomtests.hpp"
#include "cantor/tree.hpp"

namespace cantor {

using json = nlohmann::ordered_json;

/// Input that does not match the expected document shape.
class SchemaError : public Error {
 public:
  using Error::Error;
};

json load_json_file(const std::string& path);

// Readers. All throw SchemaError on shape problems.
Rational rational_from_json(const json& j, const char* what);
BitString bitstring_from_json(const json& j);
std::vector<BitString> strings_from_json(const json& j);
TreeModel tree_from_json(const json& j);
Order order_from_json(const json& j);
CylinderMeasure measure_from_json(const json& j);
DyadicMeasure dyadic_from_json(const json& j);
MonotoneMachine machine_from_json(const json& j);
TestObject test_from_json(const json& j);
Semimeasure semimeasure_from_json(const json& j);
Premeasure premeasure_from_json(const json& j);

// Writers.
json to_json(const Rational& r);
json to_json(const Value& v);
json to_json(const BitString& s);
json to_json(const std::vector<BitString>& v);
json to_json(Tri t);
json to_json(const Order& h);
json to_json(const TreeModel& T);
json to_json(const ExpandedTree& t);
json to_json(const MassTable& t);
json to_json(const DyadicMeasure& d);
/// Chain form; the mass table is added when `table_depth` is given.
json to_json(const CylinderMeasure& m, std::optional<unsigned> table_depth = {});
json to_json(const TestObject& W);
json to_json(const Violation& v);
json to_json(const CutCertificate& c);
json to_json(const Method1Result& r);
json to_json(const DimensionEstimate& e);
json to_json(const FrostmanAudit& a);
json to_json(const FlowResult& r);
json to_json(const EnergyReport& e);
json to_json(const LevelVerdict& v);
json to_json(const TestVerdict& v);
json to_json(const ConversionResult& r);
json to_json(const GeometricalReport& g);

}  // namespace cantor
