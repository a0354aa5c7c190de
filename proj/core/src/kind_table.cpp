#include <algorithm>
#include <cctype>
#include <fstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "asym/engine.hpp"

namespace asym {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

}  // namespace

KindId KindTable::add(UnitKind kind) {
  auto fail = [&](const std::string& why) {
    throw ConfigError("unit kind '" + kind.name + "': " + why);
  };
  if (kind.name.empty()) fail("empty name");
  if (kind.hp0 < 1) fail("hp0 must be >= 1");
  if (kind.damage < 0) fail("damage must be >= 0");
  if (kind.range < 0) fail("range must be >= 0");
  if (kind.cooldown < 0) fail("cooldown must be >= 0");
  if (kind.speed < 1) fail("speed must be >= 1");
  if (kind.width < 0 || kind.height < 0) fail("size must be >= 0");
  if (kinds_.size() >= 255) fail("too many kinds");
  if (find(kind.name) || (!kind.abbrev.empty() && find(kind.abbrev)))
    fail("name or abbreviation already in use");
  kinds_.push_back(std::move(kind));
  return static_cast<KindId>(kinds_.size() - 1);
}

std::optional<KindId> KindTable::find(std::string_view name) const {
  for (std::size_t k = 0; k < kinds_.size(); ++k) {
    if (iequals(kinds_[k].name, name) ||
        (!kinds_[k].abbrev.empty() && iequals(kinds_[k].abbrev, name)))
      return static_cast<KindId>(k);
  }
  return std::nullopt;
}

KindId KindTable::at(std::string_view name) const {
  if (auto k = find(name)) return *k;
  throw ConfigError("unknown unit kind '" + std::string(name) + "'");
}

KindTable default_kind_table() {
  KindTable t;
  t.add({"Zealot", "Zl", 160, 16, 0, 22, 4, 32, 40});
  t.add({"Dragoon", "Dg", 180, 20, 128, 30, 4, 40, 50});
  t.add({"Zergling", "Lg", 35, 5, 0, 8, 5, 20, 22});
  t.add({"Marine", "Mr", 40, 6, 128, 15, 3, 18, 22});
  return t;
}

const std::shared_ptr<const KindTable>& shared_default_kinds() {
  static const std::shared_ptr<const KindTable> table =
      std::make_shared<const KindTable>(default_kind_table());
  return table;
}

KindTable parse_kind_table(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("unit table: ") + e.what());
  }
  KindTable table;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("unit table: key '" + section + "' outside a section");
    UnitKind k;
    k.name = section;
    try {
      k.abbrev = body.get<std::string>("abbrev", "");
      k.hp0 = body.get<int>("hp0");
      k.damage = body.get<int>("damage");
      k.range = body.get<int>("range");
      k.cooldown = body.get<int>("cooldown");
      k.speed = body.get<int>("speed");
      k.width = body.get<int>("width");
      k.height = body.get<int>("height");
    } catch (const pt::ptree_error& e) {
      throw ConfigError("unit table [" + section + "]: " + e.what());
    }
    table.add(std::move(k));
  }
  if (table.size() == 0) throw ConfigError("unit table is empty");
  return table;
}

KindTable load_kind_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open unit table " + path.string());
  return parse_kind_table(in);
}

void write_kind_table(std::ostream& out, const KindTable& table) {
  bool first = true;
  for (const UnitKind& k : table.kinds()) {
    if (!first) out << '\n';
    first = false;
    out << '[' << k.name << "]\n";
    if (!k.abbrev.empty()) out << "abbrev = " << k.abbrev << '\n';
    out << "hp0 = " << k.hp0 << '\n'
        << "damage = " << k.damage << '\n'
        << "range = " << k.range << '\n'
        << "cooldown = " << k.cooldown << '\n'
        << "speed = " << k.speed << '\n'
        << "width = " << k.width << '\n'
        << "height = " << k.height << '\n';
  }
}

}  // namespace asym
