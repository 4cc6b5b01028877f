#include "cyberlogic/schengen.hpp"

#include "cyberlogic/errors.hpp"

namespace cyberlogic {

const std::string& CountryRegistry::consulate(const CountryName& c) const {
  auto it = consulate_of.find(c);
  if (it == consulate_of.end()) throw EngineError(ErrorCode::UnknownCountry, c);
  return it->second;
}

Formula prop_form_requirement(const SchengenForm& form) {
  return Formula::atom("schengen_form_requirement", {Formula::atom(form.id)});
}

Formula prop_passport_photo(const Photo& photo) {
  return Formula::atom("passport_photo", {Formula::atom(photo.id)});
}

Formula prop_travel_valid(const Flight& flight) {
  return Formula::atom("travel_valid", {Formula::atom(flight.id)});
}

Formula prop_travel_health_valid(const TravelHealth& policy) {
  return Formula::atom("travel_health_valid", {Formula::atom(policy.id)});
}

Formula prop_accommodation_valid(const Accommodation& acc) {
  return Formula::atom("accommodation_valid", {Formula::atom(acc.id)});
}

Formula prop_valid_passport(const Passport& passport) {
  return Formula::atom("valid_passport", {Formula::atom(passport.id)});
}

namespace {

void encode(Encoder& e, const SchengenForm& f) {
  e.str(f.id);
  e.u64(f.from);
  e.u64(f.to);
  e.str(f.requester);
  e.str(f.country);
  e.str(f.body);
}

void encode(Encoder& e, const Photo& p) {
  e.str(p.id);
  e.str(p.blob);
}

void encode(Encoder& e, const Passport& p) {
  e.str(p.id);
  e.str(p.delivered_by);
  e.u64(p.expiry);
  e.u64(p.visas.size());
  for (const std::string& v : p.visas) e.str(v);
  e.str(p.holder);
}

void encode(Encoder& e, const Flight& f) {
  e.str(f.id);
  e.str(f.airline);
  e.u64(f.flight_no);
  e.str(f.passenger);
  e.str(f.dep_country);
  e.u64(f.dep_time);
  e.str(f.arr_country);
  e.u64(f.arr_time);
  e.u64(f.dep_airport);
  e.u64(f.arr_airport);
  e.u64(f.price);
}

void encode(Encoder& e, const TravelHealth& t) {
  e.str(t.id);
  e.str(t.insurer);
  e.str(t.insured);
  e.str(t.policy);
}

void encode(Encoder& e, const Accommodation& a) {
  e.str(a.id);
  e.str(a.shelter_at);
  e.u64(a.from);
  e.u64(a.to);
}

void encode(Encoder& e, const SufficientMeans& m) {
  e.u8(static_cast<std::uint8_t>(m.kind));
  e.str(m.authority);
  e.u64(m.amount);
  e.formula(m.claim);
}

SchengenForm decode_form(Decoder& d) {
  SchengenForm f;
  f.id = d.str();
  f.from = d.u64();
  f.to = d.u64();
  f.requester = d.str();
  f.country = d.str();
  f.body = d.str();
  return f;
}

Photo decode_photo(Decoder& d) {
  Photo p;
  p.id = d.str();
  p.blob = d.str();
  return p;
}

Passport decode_passport(Decoder& d) {
  Passport p;
  p.id = d.str();
  p.delivered_by = d.str();
  p.expiry = d.u64();
  std::uint64_t n = d.u64();
  for (std::uint64_t i = 0; i < n; ++i) p.visas.push_back(d.str());
  p.holder = d.str();
  return p;
}

Flight decode_flight(Decoder& d) {
  Flight f;
  f.id = d.str();
  f.airline = d.str();
  f.flight_no = d.u64();
  f.passenger = d.str();
  f.dep_country = d.str();
  f.dep_time = d.u64();
  f.arr_country = d.str();
  f.arr_time = d.u64();
  f.dep_airport = d.u64();
  f.arr_airport = d.u64();
  f.price = d.u64();
  return f;
}

TravelHealth decode_travel_health(Decoder& d) {
  TravelHealth t;
  t.id = d.str();
  t.insurer = d.str();
  t.insured = d.str();
  t.policy = d.str();
  return t;
}

Accommodation decode_accommodation(Decoder& d) {
  Accommodation a;
  a.id = d.str();
  a.shelter_at = d.str();
  a.from = d.u64();
  a.to = d.u64();
  return a;
}

SufficientMeans decode_means(Decoder& d) {
  SufficientMeans m;
  std::uint8_t kind = d.u8();
  if (kind > static_cast<std::uint8_t>(SufficientMeans::Kind::Employment))
    throw DecodeError("bad sufficient-means tag");
  m.kind = static_cast<SufficientMeans::Kind>(kind);
  m.authority = d.str();
  m.amount = d.u64();
  m.claim = d.formula();
  return m;
}

}  // namespace

void encode(Encoder& e, const SchengenDemand& d) {
  e.str(d.id);
  encode(e, d.form);
  encode(e, d.picture);
  encode(e, d.pass);
  e.u64(d.travels.size());
  for (const Flight& f : d.travels) encode(e, f);
  encode(e, d.insurance);
  e.u64(d.lodgings.size());
  for (const Accommodation& a : d.lodgings) encode(e, a);
  encode(e, d.sufficient);
  e.u64(d.time_stamp);
}

void encode(Encoder& e, const Visa& v) {
  e.str(v.id);
  e.str(v.delivered_by);
  e.u64(v.duration);
  e.formula(v.kind);
  e.str(v.country);
  e.digest(v.demand_ref);
}

SchengenDemand decode_demand(Decoder& d) {
  SchengenDemand out;
  out.id = d.str();
  out.form = decode_form(d);
  out.picture = decode_photo(d);
  out.pass = decode_passport(d);
  std::uint64_t flights = d.u64();
  for (std::uint64_t i = 0; i < flights; ++i) out.travels.push_back(decode_flight(d));
  out.insurance = decode_travel_health(d);
  std::uint64_t lodgings = d.u64();
  for (std::uint64_t i = 0; i < lodgings; ++i) out.lodgings.push_back(decode_accommodation(d));
  out.sufficient = decode_means(d);
  out.time_stamp = d.u64();
  return out;
}

Visa decode_visa(Decoder& d) {
  Visa v;
  v.id = d.str();
  v.delivered_by = d.str();
  v.duration = d.u64();
  v.kind = d.formula();
  v.country = d.str();
  v.demand_ref = d.digest();
  return v;
}

bool operator==(const Visa& a, const Visa& b) {
  Encoder ea, eb;
  encode(ea, a);
  encode(eb, b);
  return ea.bytes() == eb.bytes();
}

}  // namespace cyberlogic
