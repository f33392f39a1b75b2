#pragma once

#include <stdexcept>
#include <string>

namespace swarmix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidConfig : public Error {
 public:
  InvalidConfig(std::string key, const std::string& what)
      : Error("invalid config '" + key + "': " + what), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class EmptyProfile : public Error {
 public:
  EmptyProfile() : Error("rating profile is empty") {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UserTooSparse : public Error {
 public:
  using Error::Error;
};

class NoEligiblePeers : public Error {
 public:
  using Error::Error;
};

class ResponderUnreachable : public Error {
 public:
  using Error::Error;
};

class BuddyUnreachable : public Error {
 public:
  using Error::Error;
};

class DeadPeer : public Error {
 public:
  using Error::Error;
};

}  // namespace swarmix
