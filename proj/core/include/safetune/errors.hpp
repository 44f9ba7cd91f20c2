#pragma once

#include <stdexcept>
#include <string>

namespace safetune {

/// Bad arguments to a library call (dimension mismatch, out-of-domain point).
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or inconsistent configuration (files, element chains, ranges).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Linear algebra / simulation breakdown (singular system, non-finite state).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// A plant evaluation failed (timeout, malformed response, non-finite value).
class plant_error : public std::runtime_error {
public:
    explicit plant_error(const std::string& what) : std::runtime_error(what) {}
};

/// The optimization loop cannot continue (empty safe set, empty candidate set).
class campaign_error : public std::runtime_error {
public:
    explicit campaign_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace safetune
