#include "trajkit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

namespace trajkit {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

struct Row {
  long scene_id;
  long agent_id;
  double frame;
  double x;
  double y;
};

double parse_field(const std::string& s, std::size_t line_no,
                   const char* what) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                     " '" + s + "'");
  return v;
}

constexpr double kFrameTol = 1e-9;

}  // namespace

Dataset parse_dataset(const std::string& path, DatasetFormat) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");

  std::vector<Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, '\t')) fields.push_back(field);
    if (fields.size() != 5)
      throw ParseError("line " + std::to_string(line_no) + ": expected 5 "
                       "tab-separated fields, got " +
                       std::to_string(fields.size()));
    Row r;
    r.scene_id = static_cast<long>(parse_field(fields[0], line_no, "scene id"));
    r.agent_id = static_cast<long>(parse_field(fields[1], line_no, "agent id"));
    r.frame = parse_field(fields[2], line_no, "frame");
    r.x = parse_field(fields[3], line_no, "x");
    r.y = parse_field(fields[4], line_no, "y");
    if (!std::isfinite(r.x) || !std::isfinite(r.y))
      throw ParseError("line " + std::to_string(line_no) +
                       ": non-finite coordinate");
    rows.push_back(r);
  }
  if (rows.empty()) throw ParseError("'" + path + "': no data rows");

  // Group by (scene, agent) preserving first-encounter order.
  std::map<std::pair<long, long>, std::size_t> slot;
  struct Group {
    long scene_id;
    long agent_id;
    std::vector<std::pair<double, Point2>> samples;
  };
  std::vector<Group> groups;
  std::vector<long> scene_order;
  for (const Row& r : rows) {
    auto key = std::make_pair(r.scene_id, r.agent_id);
    auto it = slot.find(key);
    if (it == slot.end()) {
      slot.emplace(key, groups.size());
      groups.push_back({r.scene_id, r.agent_id, {}});
      it = slot.find(key);
    }
    groups[it->second].samples.emplace_back(r.frame, Point2{r.x, r.y});
  }

  Dataset d;
  d.label = path;
  std::map<long, std::size_t> scene_slot;
  for (Group& g : groups) {
    std::sort(g.samples.begin(), g.samples.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (g.samples.size() < 2)
      throw ParseError("scene " + std::to_string(g.scene_id) + " agent " +
                       std::to_string(g.agent_id) +
                       ": trajectory needs at least 2 samples");
    const double dt = g.samples[1].first - g.samples[0].first;
    if (dt <= 0.0)
      throw ParseError("scene " + std::to_string(g.scene_id) + " agent " +
                       std::to_string(g.agent_id) +
                       ": frames not strictly increasing");
    for (std::size_t i = 1; i < g.samples.size(); ++i) {
      const double step = g.samples[i].first - g.samples[i - 1].first;
      if (std::fabs(step - dt) > kFrameTol)
        throw ParseError("scene " + std::to_string(g.scene_id) + " agent " +
                         std::to_string(g.agent_id) +
                         ": non-uniform frame spacing");
    }

    Trajectory t;
    t.dt = dt;
    t.points.reserve(g.samples.size());
    for (const auto& [frame, p] : g.samples) t.points.push_back(p);
    const int n = static_cast<int>(t.points.size());
    if (n == 20) {
      t.obs_len = 8;
      t.pred_len = 12;
    } else {
      t.obs_len = std::min(8, n - 1);
      t.pred_len = n - t.obs_len;
    }

    auto sit = scene_slot.find(g.scene_id);
    if (sit == scene_slot.end()) {
      scene_slot.emplace(g.scene_id, d.scenes.size());
      Scene s;
      s.id = static_cast<int>(g.scene_id);
      s.frame0 = static_cast<long>(std::llround(g.samples.front().first));
      s.bounds = tight_bbox(t.points);
      d.scenes.push_back(std::move(s));
      sit = scene_slot.find(g.scene_id);
    }
    Scene& s = d.scenes[sit->second];
    for (const auto& p : t.points) s.bounds.expand(p);
    s.agents.push_back({static_cast<int>(g.agent_id), std::move(t)});
  }
  return d;
}

void write_dataset(const Dataset& d, const std::string& path) {
  if (d.empty()) throw std::invalid_argument("write_dataset: empty dataset");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  for (const auto& s : d.scenes) {
    for (const auto& a : s.agents) {
      const double f0 = static_cast<double>(s.frame0);
      for (std::size_t i = 0; i < a.traj.points.size(); ++i) {
        const double frame = f0 + static_cast<double>(i) * a.traj.dt;
        out << s.id << '\t' << a.id << '\t' << format_double(frame) << '\t'
            << format_double(a.traj.points[i].x) << '\t'
            << format_double(a.traj.points[i].y) << '\n';
      }
    }
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace trajkit
