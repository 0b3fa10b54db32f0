#include "giant/netlist.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "giant/io.hpp"

namespace ga::mwnet {

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw ParseError(source + ":" + std::to_string(line) + ": " + what);
}

double number(const std::string& tok, const std::string& source, int line) {
  double v;
  if (!io::parse_double(tok, v)) fail(source, line, "not a number: '" + tok + "'");
  return v;
}

}  // namespace

NodalNetwork parse_netlist(std::istream& in, const std::string& source) {
  NodalNetwork net;
  net.v_phase = 0.0;
  bool have_ports = false;
  std::vector<double> squids;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    auto expect = [&](std::size_t n, const char* usage) {
      if (tok.size() != n) fail(source, lineno, std::string("expected '") + usage + "'");
    };
    if (kw == "ports") {
      expect(3, "ports <node> <node>");
      net.port1 = tok[1];
      net.port2 = tok[2];
      have_ports = true;
    } else if (kw == "z0") {
      expect(2, "z0 <ohm>");
      net.z0 = number(tok[1], source, lineno);
    } else if (kw == "vphase") {
      expect(2, "vphase <m/s>");
      net.v_phase = number(tok[1], source, lineno);
    } else if (kw == "island") {
      expect(2, "island <node>");
      net.island = tok[1];
    } else if (kw == "cpw") {
      expect(6, "cpw <len_m> <z0> <v> <a> <b>");
      net.add_cpw(number(tok[1], source, lineno), tok[4], tok[5], number(tok[2], source, lineno),
                  number(tok[3], source, lineno));
    } else if (kw == "lser") {
      expect(4, "lser <l_h> <a> <b>");
      net.add_series_inductor(number(tok[1], source, lineno), tok[2], tok[3]);
    } else if (kw == "cap") {
      expect(4, "cap <c_f> <a> <b>");
      net.add_capacitor(number(tok[1], source, lineno), tok[2], tok[3]);
    } else if (kw == "ind") {
      expect(4, "ind <l_h> <a> <b>");
      net.add_inductor(number(tok[1], source, lineno), tok[2], tok[3]);
    } else if (kw == "squid") {
      expect(2, "squid <l_h>");
      squids.push_back(number(tok[1], source, lineno));
    } else {
      fail(source, lineno, "unknown element '" + kw + "'");
    }
  }
  if (!have_ports) throw ParseError(source + ": missing 'ports' declaration");
  if (!squids.empty() && net.island.empty()) throw ParseError(source + ": 'squid' needs an 'island' declaration");
  for (double l : squids) net.add_squid(l);
  net.validate();
  return net;
}

NodalNetwork load_netlist(const std::string& path) {
  const std::string p = io::resolve_data_path(path);
  std::ifstream in(p);
  if (!in) throw ParseError(p + ": cannot open file");
  return parse_netlist(in, p);
}

std::string format_netlist(const NodalNetwork& net) {
  std::ostringstream out;
  out << "ports " << net.port1 << ' ' << net.port2 << '\n';
  out << "z0 " << io::format_double(net.z0) << '\n';
  if (net.v_phase > 0.0) out << "vphase " << io::format_double(net.v_phase) << '\n';
  if (!net.island.empty()) out << "island " << net.island << '\n';
  for (const auto& b : net.branches) {
    const bool squid = b.kind == BranchKind::inductor && !net.island.empty() &&
                       ((b.a == net.island && is_ground(b.b)));
    if (squid) {
      out << "squid " << io::format_double(b.value) << '\n';
      continue;
    }
    out << to_string(b.kind) << ' ' << io::format_double(b.value) << ' ';
    if (b.kind == BranchKind::cpw_section) out << io::format_double(b.z0) << ' ' << io::format_double(b.v) << ' ';
    out << b.a << ' ' << b.b << '\n';
  }
  return out.str();
}

}  // namespace ga::mwnet
