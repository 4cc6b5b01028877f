#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cyberlogic/canonical.hpp"
#include "cyberlogic/formula.hpp"
#include "cyberlogic/hash.hpp"

namespace cyberlogic {

// Countries are registry keys; membership and consulates come from the
// registry, nothing is hard-coded.
using CountryName = std::string;

// Every record carries a symbolic id (an identifier token). Propositions
// about records reference them by that id, so attested facts in fixtures can
// be written down as plain formulas.
struct SchengenForm {
  std::string id;
  Time from = 0;  // intended entry into the area
  Time to = 0;    // intended exit; invariant from < to
  std::string requester;
  CountryName country;
  std::string body;  // opaque filled-in form payload
};

struct Photo {
  std::string id;
  std::string blob;
};

struct Passport {
  std::string id;
  std::string delivered_by;
  Time expiry = 0;
  std::vector<std::string> visas;  // ids of previously granted visas
  std::string holder;
};

struct Flight {
  std::string id;
  std::string airline;
  std::uint64_t flight_no = 0;
  std::string passenger;
  CountryName dep_country;
  Time dep_time = 0;
  CountryName arr_country;
  Time arr_time = 0;
  std::uint64_t dep_airport = 0;  // IATA code
  std::uint64_t arr_airport = 0;
  std::uint64_t price = 0;
};

struct TravelHealth {
  std::string id;
  std::string insurer;  // emitting authority
  std::string insured;
  std::string policy;
};

struct Accommodation {
  std::string id;
  std::string shelter_at;
  Time from = 0;
  Time to = 0;
};

struct SufficientMeans {
  enum class Kind { BankStatement, CreditCard, Cash, Employment };
  Kind kind = Kind::Employment;
  std::string authority;      // bank / issuer / employer; empty for cash
  std::uint64_t amount = 0;   // credit card / cash
  Formula claim;              // the claimed proposition backing the means
};

struct SchengenDemand {
  std::string id;
  SchengenForm form;
  Photo picture;
  Passport pass;
  std::vector<Flight> travels;
  TravelHealth insurance;
  std::vector<Accommodation> lodgings;
  SufficientMeans sufficient;
  Time time_stamp = 0;
};

struct Visa {
  std::string id;
  std::string delivered_by;
  Time duration = 0;
  Formula kind;  // stored, uninterpreted by the policies
  CountryName country;
  Digest demand_ref = kZeroDigest;  // hash of the originating demand entry
};

struct CountryRegistry {
  std::set<CountryName> countries;
  std::map<CountryName, std::string> consulate_of;
  std::map<std::string, CountryName> country_of;
  std::set<std::string> schengen_officers;
  std::map<CountryName, std::string> means_rule;  // rule name per country

  const std::string& consulate(const CountryName& c) const;  // throws UnknownCountry
  bool is_officer(const std::string& authority) const { return schengen_officers.count(authority); }
};

// Propositions the requirement checks look for in the knowledge base.
Formula prop_form_requirement(const SchengenForm& form);
Formula prop_passport_photo(const Photo& photo);
Formula prop_travel_valid(const Flight& flight);
Formula prop_travel_health_valid(const TravelHealth& policy);
Formula prop_accommodation_valid(const Accommodation& acc);
Formula prop_valid_passport(const Passport& passport);

// Canonical encodings feeding entry hashes and the persisted ledger.
void encode(Encoder& e, const SchengenDemand& d);
void encode(Encoder& e, const Visa& v);
SchengenDemand decode_demand(Decoder& d);
Visa decode_visa(Decoder& d);

bool operator==(const Visa& a, const Visa& b);

}  // namespace cyberlogic
