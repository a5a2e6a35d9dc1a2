package com.example;

/**
 * Integer helpers exercised by the arithmetic fixtures.
 */
public class Calculator {

    /**
     * Combines the window bounds into a single figure.
     */
    public int windowSum(int index, int length) {
        int sum = (index + 1) * (length + index);
        return sum;
    }

    public int subtract(int a, int b) {
        return a - b;
    }

    public int scale(int a, int b) {
        return a * b;
    }

    /** Integer ratio of the two inputs. */
    public int ratio(int a, int b) {
        return a / b;
    }

    public int remainder(int a, int b) {
        return a % b;
    }
}
