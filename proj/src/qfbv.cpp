#include "qbv/qfbv.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <cmath>
#include <sstream>

#include "qbv/printer.hpp"

namespace qbv {

GroundVerdict check(const TermStore& store, Term phi,
                    const CheckOptions& opts) {
  GroundVerdict verdict;
  BitBlastResult blasted = bitblast(phi);
  SatOptions sopts;
  sopts.conflict_budget = opts.conflict_budget;
  sopts.seed = opts.seed;
  SatResult res = sat_solve(blasted.cnf, sopts);
  verdict.conflicts = res.conflicts;
  switch (res.status) {
    case SatStatus::Unsat:
      verdict.kind = GroundVerdict::Kind::Unsat;
      return verdict;
    case SatStatus::ResourceOut:
      verdict.kind = GroundVerdict::Kind::ResourceOut;
      verdict.diagnostic = "conflict budget exhausted after " +
                           std::to_string(res.conflicts) + " conflicts";
      return verdict;
    case SatStatus::Sat:
      break;
  }

  for (VarId v : free_vars(phi)) {
    Sort sort = store.var_sort(v);
    if (sort.is_bool()) {
      auto it = blasted.bool_lits.find(v.id);
      bool val = it != blasted.bool_lits.end() && res.model[it->second];
      verdict.model.set(v, val);
    } else {
      uint64_t value = 0;
      auto it = blasted.bv_bits.find(v.id);
      if (it != blasted.bv_bits.end()) {
        for (uint32_t i = 0; i < sort.width(); ++i) {
          int lit = it->second[i];
          bool bit = lit > 0 ? res.model[lit] : !res.model[-lit];
          if (bit) value |= uint64_t{1} << i;
        }
      }
      verdict.model.set(v, BitVec(sort.width(), value));
    }
  }
  // The extracted word-level model must satisfy the formula; anything
  // else is a bug in the encoding.
  EvalOptions eopts;
  eopts.quant_width_cap = kMaxWidth;
  if (!evaluate_bool(phi, verdict.model, eopts))
    throw Error("bitblast model fails to satisfy the formula");
  verdict.kind = GroundVerdict::Kind::Sat;
  return verdict;
}

GroundVerdict enumerate_check(const TermStore& store, Term phi,
                              const CheckOptions& opts) {
  GroundVerdict verdict;
  std::set<VarId> fv = free_vars(phi);
  std::vector<VarId> vars(fv.begin(), fv.end());

  long double space = 1.0L;
  for (VarId v : vars) {
    Sort s = store.var_sort(v);
    space *= s.is_bool() ? 2.0L : std::pow(2.0L, s.width());
    if (space > static_cast<long double>(opts.enum_state_cap)) {
      verdict.kind = GroundVerdict::Kind::ResourceOut;
      verdict.diagnostic = "state space exceeds enumeration cap of " +
                           std::to_string(opts.enum_state_cap);
      return verdict;
    }
  }

  std::vector<uint64_t> counter(vars.size(), 0);
  std::vector<uint64_t> limit(vars.size());
  for (size_t i = 0; i < vars.size(); ++i) {
    Sort s = store.var_sort(vars[i]);
    limit[i] = s.is_bool() ? 2 : uint64_t{1} << s.width();
  }

  Interpretation interp;
  EvalOptions eopts;
  eopts.quant_width_cap = kMaxWidth;
  for (;;) {
    for (size_t i = 0; i < vars.size(); ++i) {
      Sort s = store.var_sort(vars[i]);
      if (s.is_bool())
        interp.set(vars[i], counter[i] != 0);
      else
        interp.set(vars[i], BitVec(s.width(), counter[i]));
    }
    if (evaluate_bool(phi, interp, eopts)) {
      verdict.kind = GroundVerdict::Kind::Sat;
      verdict.model = interp;
      return verdict;
    }
    size_t i = 0;
    while (i < vars.size() && ++counter[i] == limit[i]) counter[i++] = 0;
    if (i == vars.size()) break;
  }
  verdict.kind = GroundVerdict::Kind::Unsat;
  return verdict;
}

namespace {

std::string render_script(const TermStore& store, Term phi) {
  std::ostringstream os;
  os << "(set-logic QF_BV)\n";
  for (VarId v : free_vars(phi))
    os << "(declare-const " << store.var_name(v) << " "
       << sort_smtlib(store.var_sort(v)) << ")\n";
  os << "(assert " << to_smtlib(store, phi) << ")\n";
  os << "(check-sat)\n(get-model)\n";
  return os.str();
}

// Runs `sh -c command`, feeding `input` on stdin; captures stdout.
bool run_process(const std::string& command, const std::string& input,
                 std::string& output, std::string& err) {
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    err = "pipe() failed";
    return false;
  }
  pid_t pid = fork();
  if (pid < 0) {
    err = "fork() failed";
    return false;
  }
  if (pid == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execlp("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  size_t off = 0;
  while (off < input.size()) {
    ssize_t n = write(in_pipe[1], input.data() + off, input.size() - off);
    if (n <= 0) break;
    off += static_cast<size_t>(n);
  }
  close(in_pipe[1]);
  char buf[4096];
  ssize_t n;
  while ((n = read(out_pipe[0], buf, sizeof buf)) > 0)
    output.append(buf, static_cast<size_t>(n));
  close(out_pipe[0]);
  int status = 0;
  waitpid(pid, &status, 0);
  if (!WIFEXITED(status)) {
    err = "solver process did not exit normally";
    return false;
  }
  return true;
}

// Minimal s-expression reader for model responses.
struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_atom() const { return list.empty() && !atom.empty(); }
};

size_t parse_sexpr(const std::string& text, size_t pos, SExpr& out) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
    ++pos;
  if (pos >= text.size()) return std::string::npos;
  if (text[pos] == '(') {
    ++pos;
    for (;;) {
      while (pos < text.size() &&
             std::isspace(static_cast<unsigned char>(text[pos])))
        ++pos;
      if (pos >= text.size()) return std::string::npos;
      if (text[pos] == ')') return pos + 1;
      SExpr kid;
      pos = parse_sexpr(text, pos, kid);
      if (pos == std::string::npos) return pos;
      out.list.push_back(std::move(kid));
    }
  }
  size_t start = pos;
  while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
         text[pos] != '(' && text[pos] != ')')
    ++pos;
  out.atom = text.substr(start, pos - start);
  return pos;
}

bool parse_bv_value(const SExpr& e, uint64_t& value, uint32_t& width) {
  if (e.is_atom()) {
    const std::string& a = e.atom;
    if (a.size() > 2 && a[0] == '#' && a[1] == 'b') {
      width = static_cast<uint32_t>(a.size() - 2);
      value = 0;
      for (size_t i = 2; i < a.size(); ++i) {
        if (a[i] != '0' && a[i] != '1') return false;
        value = (value << 1) | static_cast<uint64_t>(a[i] - '0');
      }
      return width >= 1 && width <= kMaxWidth;
    }
    if (a.size() > 2 && a[0] == '#' && a[1] == 'x') {
      width = static_cast<uint32_t>(4 * (a.size() - 2));
      value = 0;
      for (size_t i = 2; i < a.size(); ++i) {
        int d;
        char c = static_cast<char>(std::tolower(a[i]));
        if (c >= '0' && c <= '9') d = c - '0';
        else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
        else return false;
        value = (value << 4) | static_cast<uint64_t>(d);
      }
      return width >= 1 && width <= kMaxWidth;
    }
    return false;
  }
  // (_ bvN w)
  if (e.list.size() == 3 && e.list[0].atom == "_" &&
      e.list[1].atom.rfind("bv", 0) == 0) {
    try {
      value = std::stoull(e.list[1].atom.substr(2));
      width = static_cast<uint32_t>(std::stoul(e.list[2].atom));
    } catch (...) {
      return false;
    }
    return width >= 1 && width <= kMaxWidth;
  }
  return false;
}

}  // namespace

GroundVerdict external_check(const TermStore& store, Term phi,
                             const std::string& command,
                             const CheckOptions&) {
  GroundVerdict verdict;
  verdict.kind = GroundVerdict::Kind::ResourceOut;

  std::string output, err;
  if (!run_process(command, render_script(store, phi), output, err)) {
    verdict.diagnostic = "external solver failed: " + err;
    return verdict;
  }

  std::istringstream is(output);
  std::string first;
  if (!(is >> first)) {
    verdict.diagnostic = "external solver produced no output";
    return verdict;
  }
  if (first == "unsat") {
    verdict.kind = GroundVerdict::Kind::Unsat;
    return verdict;
  }
  if (first == "unknown") {
    verdict.diagnostic = "external solver answered unknown";
    return verdict;
  }
  if (first != "sat") {
    verdict.diagnostic = "unrecognized solver answer '" + first + "'";
    return verdict;
  }

  // Model: the remainder should hold (define-fun name () sort value)
  // entries, possibly wrapped in an outer (model ...) or plain list.
  std::streampos tp = is.tellg();
  std::string rest =
      tp < 0 ? std::string() : output.substr(static_cast<size_t>(tp));
  std::unordered_map<std::string, VarId> by_name;
  for (VarId v : free_vars(phi)) by_name.emplace(store.var_name(v), v);

  std::vector<SExpr> exprs;
  size_t pos = 0;
  while (pos < rest.size()) {
    size_t probe = rest.find_first_not_of(" \t\r\n", pos);
    if (probe == std::string::npos) break;
    SExpr e;
    size_t next = parse_sexpr(rest, probe, e);
    if (next == std::string::npos) {
      verdict.diagnostic = "malformed model response";
      return verdict;
    }
    exprs.push_back(std::move(e));
    pos = next;
  }

  std::vector<const SExpr*> defines;
  auto collect = [&](const SExpr& e, auto&& self) -> void {
    if (!e.list.empty() && e.list[0].is_atom() &&
        e.list[0].atom == "define-fun") {
      defines.push_back(&e);
      return;
    }
    for (const SExpr& kid : e.list) self(kid, self);
  };
  for (const SExpr& e : exprs) collect(e, collect);

  for (const SExpr* d : defines) {
    if (d->list.size() != 5) continue;
    const std::string& name = d->list[1].atom;
    auto it = by_name.find(name);
    if (it == by_name.end()) continue;
    Sort sort = store.var_sort(it->second);
    const SExpr& value = d->list[4];
    if (sort.is_bool()) {
      if (value.atom == "true")
        verdict.model.set(it->second, true);
      else if (value.atom == "false")
        verdict.model.set(it->second, false);
      else {
        verdict.diagnostic = "bad Boolean value for " + name;
        return verdict;
      }
    } else {
      uint64_t v;
      uint32_t w;
      if (!parse_bv_value(value, v, w) || w != sort.width()) {
        verdict.diagnostic = "bad bit-vector value for " + name;
        return verdict;
      }
      verdict.model.set(it->second, BitVec(w, v));
    }
  }
  for (VarId v : free_vars(phi)) {
    if (!verdict.model.contains(v)) {
      verdict.diagnostic =
          "model response is missing " + store.var_name(v);
      return verdict;
    }
  }
  verdict.kind = GroundVerdict::Kind::Sat;
  return verdict;
}

GroundVerdict ground_check(const TermStore& store, Term phi,
                           const Backend& backend, const CheckOptions& opts) {
  switch (backend.kind) {
    case BackendKind::BitBlast: return check(store, phi, opts);
    case BackendKind::Enumerate: return enumerate_check(store, phi, opts);
    case BackendKind::External:
      return external_check(store, phi, backend.external_cmd, opts);
  }
  throw Error("bad backend");
}

}  // namespace qbv
