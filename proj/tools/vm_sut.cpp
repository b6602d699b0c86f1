// Reference implementation of the vending machine used as a system under
// test. Hand-written against the machine's behaviour, deliberately not using
// the model library, so conformance runs compare two independent encodings.
//
// Wire protocol: one stimulus line "<time> <sensor> <request>" per step
// (booleans as 0/1), one response line "<mode> <output>".
//
// Modes for exercising the runner's failure paths:
//   --stuck    always answers "1 0"
//   --silent   consumes stimuli without ever answering
//   --garbage  answers an unparseable line

#include <iostream>
#include <sstream>
#include <string>

namespace {

struct VendingMachine {
    // mode: 0 choice, 1 idle, 2 strong coffee, 3 weak coffee
    // output: 0 strong, 1 weak
    long mode = 1;
    long output = 0;
    long timer = 0;
    bool prev_sensor = false;
    bool prev_request = false;

    void observe(long time, bool sensor, bool request) {
        // React until quiescent; previous input values stay fixed within an
        // instant, matching the sampled signal semantics.
        for (;;) {
            long elapsed = time - timer;
            if (mode == 1 && !prev_sensor && sensor) {
                timer = time;
                mode = 0;
            } else if (mode == 0 && !prev_request && request && elapsed > 0 && elapsed <= 3) {
                timer = time;
                mode = 3;
            } else if (mode == 0 && !prev_request && request && elapsed > 3) {
                timer = time;
                mode = 2;
            } else if (mode == 3 && elapsed >= 1) {
                output = 1;
                mode = 1;
            } else if (mode == 2 && elapsed >= 3) {
                output = 0;
                mode = 1;
            } else {
                break;
            }
        }
        prev_sensor = sensor;
        prev_request = request;
    }
};

} // namespace

int main(int argc, char** argv) {
    std::string behaviour = argc > 1 ? argv[1] : "";

    VendingMachine vm;
    std::string line;
    while (std::getline(std::cin, line)) {
        std::istringstream in(line);
        long time = 0;
        int sensor = 0;
        int request = 0;
        if (!(in >> time >> sensor >> request)) return 1;

        if (behaviour == "--silent") continue;
        if (behaviour == "--garbage") {
            std::cout << "banana\n" << std::flush;
            continue;
        }
        if (behaviour == "--stuck") {
            std::cout << "1 0\n" << std::flush;
            continue;
        }
        vm.observe(time, sensor != 0, request != 0);
        std::cout << vm.mode << ' ' << vm.output << '\n' << std::flush;
    }
    return 0;
}
