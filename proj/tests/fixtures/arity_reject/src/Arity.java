public class Arity {
    void go(Conn conn) {
        byte[] a = new byte[8];
        conn.read(a, 5);
    }
}
