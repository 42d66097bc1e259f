#ifndef HECKEL_ERRORS_HPP_
#define HECKEL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace heckel {

struct error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_input : public error { using error::error; };
struct domain_error : public error { using error::error; };
struct precision_loss : public error { using error::error; };
struct bound_exceeded : public error { using error::error; };
struct divisor_error : public error { using error::error; };
struct pole_error : public error { using error::error; };
struct calibration_missing : public error { using error::error; };
struct not_coprime : public error { using error::error; };

}

#endif	/* HECKEL_ERRORS_HPP_ */
