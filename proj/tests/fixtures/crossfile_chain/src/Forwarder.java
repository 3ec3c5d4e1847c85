public class Forwarder {
    native static void nativeConsume(byte[] d);

    static void push(byte[] d) {
        nativeConsume(d);
    }
}
