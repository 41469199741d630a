#include <algorithm>
#include <sstream>

#include "enforcekit/dsl.hpp"

namespace enforcekit::dsl {

namespace {

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

void write_action(std::ostream& os, const Action& action) {
  if (is_pass(action)) {
    os << "pass";
    return;
  }
  const auto& call = std::get<CallAction>(action);
  os << "call " << call.prefix << '.' << call.method << "()";
}

}  // namespace

std::string serialize(const EnforcementModel& model) {
  std::ostringstream os;
  os << "enforcer " << model.name << " {\n";
  if (!model.policy_text.empty()) {
    os << "  policy " << quote(model.policy_text) << '\n';
  }

  std::vector<const PrefixBinding*> bindings;
  for (const auto& b : model.bindings) bindings.push_back(&b);
  std::stable_sort(bindings.begin(), bindings.end(),
                   [](const PrefixBinding* x, const PrefixBinding* y) {
                     if (x->kind != y->kind) {
                       return x->kind == BindingKind::Component;
                     }
                     return x->prefix < y->prefix;
                   });
  for (const auto* b : bindings) {
    os << "  " << to_string(b->kind) << ' ' << b->prefix << ": " << b->qualified
       << '\n';
  }

  os << "  initial " << model.initial << '\n';
  for (const auto& state : model.states) {
    os << "  state " << state << " {\n";
    for (const auto& t : model.transitions) {
      if (t.from != state) continue;
      os << "    on " << to_string(t.on.phase) << ' ' << t.on.prefix << '.'
         << t.on.method << "() emit [";
      for (std::size_t i = 0; i < t.actions.size(); ++i) {
        if (i > 0) os << ", ";
        write_action(os, t.actions[i]);
      }
      os << "] -> " << t.to << '\n';
    }
    os << "  }\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace enforcekit::dsl
